#include <bhlab/cli.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include <bhlab/congruence.hpp>
#include <bhlab/families.hpp>
#include <bhlab/store.hpp>

namespace bhlab
{

namespace
{

// Raised for semantic usage problems found after parsing.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string family;
    std::string curve;
    std::string normalization = "canonical";
    std::optional<long> max_n;
    std::optional<long> p_max;
    std::optional<long> n_min;
    std::string format;
    std::string out;
    bool no_cache = false;
    unsigned jobs = 1;
    std::string checker;
    std::string target;
};

long nonnegative(const std::optional<long> &v, long fallback, const char *name)
{
    const long x = v.value_or(fallback);
    if (x < 0) {
        throw usage_error(std::string(name) + " must be non-negative");
    }
    return x;
}

class Runner
{
public:
    Runner(const Options &opt, std::ostream &out, std::ostream &err)
        : m_opt(opt), m_out(out), m_err(err), m_cache(ResultCache::default_directory(), &err)
    {
    }

    int compute(bool exporting)
    {
        FamilyRef ref;
        ref.family = parse_family(m_opt.family);
        if (!m_opt.curve.empty()) {
            ref.curve = CurveSpec::parse(m_opt.curve);
        }
        ref.normalization = parse_normalization(m_opt.normalization);
        ref.validate();
        const long max_n = nonnegative(m_opt.max_n, 20, "--max-n");

        std::string format = m_opt.format;
        if (format.empty()) {
            const auto ext = std::filesystem::path(m_opt.out).extension().string();
            format = ext == ".csv" ? "csv" : (ext == ".txt" ? "text" : "json");
        }
        if (exporting && m_opt.out.empty()) {
            throw usage_error("export requires --out");
        }

        RequestDescriptor desc;
        desc.command = "compute";
        desc.family = m_opt.family;
        desc.curve = ref.curve;
        desc.normalization = m_opt.normalization;
        desc.ranges = {{"max_n", max_n}};

        const auto table = cached(desc, [&] { return to_json(make_table(ref, static_cast<std::size_t>(max_n))); });
        std::string text;
        if (format == "json") {
            text = table.dump(2) + "\n";
        } else if (format == "csv") {
            text = table_json_to_csv(table);
        } else {
            text = table_json_to_text(table);
        }
        emit(text);
        return exit_ok;
    }

    int verify()
    {
        RequestDescriptor desc;
        desc.command = "verify";
        desc.family = m_opt.checker;
        std::function<SweepReport()> run;

        if (m_opt.checker == "von-staudt") {
            const long max_n = nonnegative(m_opt.max_n, 60, "--max-n");
            desc.ranges = {{"max_n", max_n}};
            run = [=] { return von_staudt_suite(static_cast<std::size_t>(max_n)); };
        } else if (m_opt.checker == "kummer") {
            const long p_max = nonnegative(m_opt.p_max, 50, "--p-max");
            const long n_max = nonnegative(m_opt.max_n, 60, "--n-max");
            desc.ranges = {{"p_max", p_max}, {"n_max", n_max}};
            const unsigned jobs = m_opt.jobs;
            run = [=] {
                return kummer_suite(static_cast<std::uint64_t>(p_max), static_cast<std::size_t>(n_max), jobs);
            };
        } else if (m_opt.checker == "hurwitz-law") {
            const long max_n = nonnegative(m_opt.max_n, 40, "--max-n");
            desc.ranges = {{"max_n", max_n}};
            run = [=] { return hurwitz_law_suite(static_cast<std::size_t>(max_n)); };
        } else if (m_opt.checker == "universal") {
            const long max_n = nonnegative(m_opt.max_n, 16, "--max-n");
            desc.ranges = {{"max_n", max_n}};
            run = [=] { return universal_suite(static_cast<std::size_t>(max_n)); };
        } else if (m_opt.checker == "template") {
            if (m_opt.target.empty()) {
                throw usage_error("verify template needs a template file");
            }
            return sweep_template(CongruenceTemplate::load(m_opt.target), true);
        } else {
            throw usage_error("unknown checker '" + m_opt.checker
                              + "' (expected von-staudt, kummer, hurwitz-law, universal or template)");
        }
        const auto report = cached(desc, [&] { return to_json(run()); });
        return finish_report(report, true);
    }

    int sweep()
    {
        if (m_opt.target.empty()) {
            throw usage_error("sweep needs a template file or built-in template id");
        }
        if (std::filesystem::exists(m_opt.target)) {
            return sweep_template(CongruenceTemplate::load(m_opt.target), false);
        }
        return sweep_template(builtin_template(m_opt.target), false);
    }

    int cache_ls()
    {
        const auto entries = m_cache.list();
        m_out << "cache directory: " << m_cache.directory().string() << '\n';
        for (const auto &e : entries) {
            m_out << e.key << "  " << e.engine_version << "  " << e.created_at << "  " << e.size_bytes << " bytes\n";
        }
        m_out << entries.size() << " entries\n";
        return exit_ok;
    }

    int cache_clear()
    {
        const auto removed = m_cache.clear();
        m_out << "removed " << removed << " entries from " << m_cache.directory().string() << '\n';
        return exit_ok;
    }

private:
    int sweep_template(const CongruenceTemplate &tmpl, bool gate)
    {
        SweepRange range;
        range.p_max = static_cast<std::uint64_t>(nonnegative(m_opt.p_max, 13, "--p-max"));
        range.n_max = nonnegative(m_opt.max_n, 30, "--max-n");
        range.n_min = nonnegative(m_opt.n_min, 1, "--n-min");

        RequestDescriptor desc;
        desc.command = "sweep";
        desc.family = std::string(to_string(tmpl.family.family));
        desc.curve = tmpl.family.curve;
        desc.normalization = std::string(to_string(tmpl.family.normalization));
        desc.ranges = {{"p_max", static_cast<long>(range.p_max)}, {"n_min", range.n_min}, {"n_max", range.n_max}};
        desc.extra = tmpl.to_json().dump();
        const unsigned jobs = m_opt.jobs;
        const auto report = cached(desc, [&] { return to_json(template_sweep(tmpl, range, jobs)); });
        return finish_report(report, gate);
    }

    int finish_report(const nlohmann::ordered_json &report, bool gate)
    {
        emit(report.dump(2) + "\n");
        const auto &summary = report.at("summary");
        const auto fails = summary.at("fail").get<std::size_t>();
        m_err << report.at("template_id").get<std::string>() << ": pass=" << summary.at("pass").get<std::size_t>()
              << " fail=" << fails << " skip=" << summary.at("skip").get<std::size_t>() << '\n';
        return gate && fails > 0 ? exit_check_failed : exit_ok;
    }

    template <typename Fn>
    nlohmann::ordered_json cached(const RequestDescriptor &desc, Fn &&compute)
    {
        if (!m_opt.no_cache) {
            if (auto hit = m_cache.get(desc)) {
                return *hit;
            }
        }
        auto payload = compute();
        if (!m_opt.no_cache) {
            try {
                m_cache.put(desc, payload);
            } catch (const std::exception &ex) {
                m_err << "warning: could not write cache entry: " << ex.what() << '\n';
            }
        }
        return payload;
    }

    void emit(const std::string &text)
    {
        if (m_opt.out.empty()) {
            m_out << text;
            return;
        }
        std::ofstream file(m_opt.out, std::ios::binary | std::ios::trunc);
        file << text;
        if (!file) {
            throw std::runtime_error("cannot write '" + m_opt.out + "'");
        }
    }

    const Options &m_opt;
    std::ostream &m_out;
    std::ostream &m_err;
    ResultCache m_cache;
};

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact Bernoulli, Hurwitz, generalized Bernoulli-Hurwitz and universal Bernoulli numbers",
                 "bhlab"};
    app.require_subcommand(1);
    Options opt;

    const std::vector<std::string> families{"bernoulli", "hurwitz", "gbh", "universal"};
    const std::vector<std::string> formats{"json", "csv", "text"};

    auto add_table_options = [&](CLI::App *cmd) {
        cmd->add_option("--family", opt.family, "Number family")->required()->check(CLI::IsMember(families));
        cmd->add_option("--curve", opt.curve, "Curve exponents a,b for y^a = 1 - x^b");
        cmd->add_option("--normalization", opt.normalization, "canonical, pe-laurent or hurwitz");
        cmd->add_option("--max-n", opt.max_n, "Largest index");
        cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember(formats));
        cmd->add_option("--out", opt.out, "Write to this file instead of stdout");
        cmd->add_flag("--no-cache", opt.no_cache, "Bypass the result cache");
    };
    auto add_check_options = [&](CLI::App *cmd) {
        cmd->add_option("--max-n,--n-max", opt.max_n, "Largest index");
        cmd->add_option("--n-min", opt.n_min, "Smallest index (templates)");
        cmd->add_option("--p-max", opt.p_max, "Largest prime");
        cmd->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", opt.out, "Write the report to this file");
        cmd->add_flag("--no-cache", opt.no_cache, "Bypass the result cache");
    };

    auto *compute = app.add_subcommand("compute", "Compute a number table");
    add_table_options(compute);
    auto *exporter = app.add_subcommand("export", "Write a number table to a file");
    add_table_options(exporter);

    auto *verify = app.add_subcommand("verify", "Run a congruence checker; exit 1 on any failure");
    verify->add_option("checker", opt.checker, "von-staudt, kummer, hurwitz-law, universal or template")->required();
    verify->add_option("template", opt.target, "Template file (for 'template')");
    add_check_options(verify);

    auto *sweep = app.add_subcommand("sweep", "Evaluate a congruence template and print the report");
    sweep->add_option("template", opt.target, "Template file or built-in id")->required();
    add_check_options(sweep);

    auto *cache = app.add_subcommand("cache", "Inspect or clear the result cache");
    cache->require_subcommand(1);
    auto *cache_ls = cache->add_subcommand("ls", "List cache entries");
    auto *cache_clear = cache->add_subcommand("clear", "Delete all cache entries");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return exit_usage;
    }

    try {
        Runner runner(opt, out, err);
        if (compute->parsed()) {
            return runner.compute(false);
        }
        if (exporter->parsed()) {
            return runner.compute(true);
        }
        if (verify->parsed()) {
            return runner.verify();
        }
        if (sweep->parsed()) {
            return runner.sweep();
        }
        if (cache_ls->parsed()) {
            return runner.cache_ls();
        }
        if (cache_clear->parsed()) {
            return runner.cache_clear();
        }
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const template_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace bhlab
