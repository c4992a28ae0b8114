// sumprodlab command-line driver. Talks to the core exclusively through the
// C API in sumprodlab.h; one subcommand per experiment family.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumprodlab.h"

namespace {

struct CommonOptions {
    std::vector<uint64_t> primes;
    std::string family = "random";
    std::string size = "32";
    uint32_t trials = 1;
    uint64_t seed = 0;
    std::string signs = "mm";
    std::string out = "-";
    std::string format = "csv";
    uint32_t threads = 0;
    std::string method = "transform";
    std::vector<std::string> thresholds;
    std::string split_k;
    std::string x_rule = "first:1";
    bool affine_bcd = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--p", opt.primes, "prime modulus (repeat or comma-separate for sweeps)")
        ->required()
        ->delimiter(',');
    cmd->add_option("--family", opt.family,
                    "set family: random | interval:a0 | geometric:r,a0 | subgroup:d | "
                    "explicit:e1,e2,...");
    cmd->add_option("--size", opt.size, "set size: absolute n, or alpha:A[,const:C] for ceil(C*p^A)");
    cmd->add_option("--trials", opt.trials, "trials per prime");
    cmd->add_option("--seed", opt.seed, "base seed; trial seeds are derived deterministically");
    cmd->add_option("--out", opt.out, "output path ('-' = stdout)");
    cmd->add_option("--format", opt.format, "csv | jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware default)");
}

int fail_with(spl_status status, const char* stage) {
    std::fprintf(stderr, "sumprodlab: %s: %s (%s)\n", stage, spl_last_error(),
                 spl_status_name(status));
    switch (status) {
    case SPL_E_VALIDATION:
    case SPL_E_INVALID_ARGUMENT:
    case SPL_E_BAD_PARAMETER:
    case SPL_E_NOT_PRIME:
    case SPL_E_TOO_LARGE:
        return 1;
    default:
        return 2;
    }
}

// "--size 50" or "--size alpha:0.625,const:4"
spl_status apply_size(spl_config* cfg, const std::string& text) {
    if (text.rfind("alpha:", 0) == 0) {
        double alpha = 0.0, constant = 1.0;
        const auto comma = text.find(",const:");
        try {
            alpha = std::stod(text.substr(6, comma == std::string::npos ? std::string::npos
                                                                        : comma - 6));
            if (comma != std::string::npos) constant = std::stod(text.substr(comma + 7));
        } catch (const std::exception&) {
            return SPL_E_VALIDATION;
        }
        return spl_config_set_size_rule(cfg, alpha, constant);
    }
    try {
        return spl_config_set_size(cfg, std::stoull(text));
    } catch (const std::exception&) {
        return SPL_E_VALIDATION;
    }
}

int run_command(const std::string& name, const CommonOptions& opt) {
    spl_config* cfg = nullptr;
    spl_status st = spl_config_create(name.c_str(), &cfg);
    if (st != SPL_OK) return fail_with(st, "config");
    std::unique_ptr<spl_config, void (*)(spl_config*)> guard(cfg, spl_config_destroy);

    for (uint64_t p : opt.primes)
        if ((st = spl_config_add_prime(cfg, p)) != SPL_OK) return fail_with(st, "config");
    if ((st = spl_config_set_family(cfg, opt.family.c_str())) != SPL_OK)
        return fail_with(st, "config");
    if ((st = apply_size(cfg, opt.size)) != SPL_OK) return fail_with(st, "config");
    if ((st = spl_config_set_trials(cfg, opt.trials)) != SPL_OK) return fail_with(st, "config");
    if ((st = spl_config_set_seed(cfg, opt.seed)) != SPL_OK) return fail_with(st, "config");
    if ((st = spl_config_set_signs(cfg, opt.signs.c_str())) != SPL_OK)
        return fail_with(st, "config");
    if ((st = spl_config_set_method(cfg, opt.method.c_str())) != SPL_OK)
        return fail_with(st, "config");
    for (const auto& k : opt.thresholds)
        if ((st = spl_config_add_threshold(cfg, k.c_str())) != SPL_OK)
            return fail_with(st, "config");
    if (!opt.split_k.empty() &&
        (st = spl_config_set_split_threshold(cfg, opt.split_k.c_str())) != SPL_OK)
        return fail_with(st, "config");
    if ((st = spl_config_set_dilate_rule(cfg, opt.x_rule.c_str())) != SPL_OK)
        return fail_with(st, "config");
    if ((st = spl_config_set_affine_bcd(cfg, opt.affine_bcd ? 1 : 0)) != SPL_OK)
        return fail_with(st, "config");
    if ((st = spl_config_set_output(cfg, opt.out.c_str(), opt.format.c_str())) != SPL_OK)
        return fail_with(st, "config");
    if ((st = spl_config_set_threads(cfg, opt.threads)) != SPL_OK) return fail_with(st, "config");

    spl_run_stats stats{};
    st = spl_run(cfg, &stats);
    if (st != SPL_OK) return fail_with(st, "run");
    if (opt.out != "-")
        std::fprintf(stderr, "sumprodlab: wrote %llu rows to %s (%llu/%llu trials ok)\n",
                     (unsigned long long)stats.rows, opt.out.c_str(),
                     (unsigned long long)(stats.trials_total - stats.trials_failed),
                     (unsigned long long)stats.trials_total);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sumprodlab: exact sum-product experiments in prime fields"};
    app.require_subcommand(1);
    app.set_version_flag("--version", spl_version());

    struct Sub {
        CLI::App* cmd;
        CommonOptions opt;
    };
    std::vector<std::unique_ptr<Sub>> subs;

    auto make = [&](const char* name, const char* desc) -> Sub& {
        auto sub = std::make_unique<Sub>();
        sub->cmd = app.add_subcommand(name, desc);
        add_common(sub->cmd, sub->opt);
        subs.push_back(std::move(sub));
        return *subs.back();
    };

    auto& bkt = make("bkt", "exact Bourgain-Katz-Tao identity and its corollary per trial");
    (void)bkt;
    auto& spectrum = make("spectrum", "dilate-energy spectrum summary per trial");
    (void)spectrum;

    auto& count = make("count", "solution counts for (a+-b)(c+-d) = (a'+-b')(c'+-d')");
    count.cmd->add_option("--signs", count.opt.signs, "difference/sum choices: mm | mp | pm | pp")
        ->check(CLI::IsMember({"mm", "mp", "pm", "pp"}));
    count.cmd->add_option("--method", count.opt.method, "brute | repfn | transform | all")
        ->check(CLI::IsMember({"brute", "repfn", "transform", "all"}));
    count.cmd->add_flag("--affine-bcd", count.opt.affine_bcd,
                        "draw B, C, D as random affine images of A");

    auto& sweep = make("sweep", "coverage sweep: support of (A+-B)(C+-D), N, identity flags");
    sweep.cmd->add_option("--signs", sweep.opt.signs, "difference/sum choices: mm | mp | pm | pp")
        ->check(CLI::IsMember({"mm", "mp", "pm", "pp"}));
    sweep.cmd->add_flag("--affine-bcd", sweep.opt.affine_bcd,
                        "draw B, C, D as random affine images of A");

    auto& census = make("census", "dyadic census of the energy spectrum at thresholds K");
    census.opt.thresholds = {"2", "4", "8"};
    census.cmd->add_option("--K", census.opt.thresholds,
                           "census thresholds (integer or num/den), default 2,4,8")
        ->delimiter(',');

    auto& rudnev = make("rudnev", "sum of E_+(A, xA) over a dilate set X vs the stated bounds");
    rudnev.cmd->add_option("--X", rudnev.opt.x_rule, "dilate set rule: first:m | random:m");

    auto& murphy = make("murphy", "sum of E_x(A, A+x) over X vs the stated bounds");
    murphy.cmd->add_option("--X", murphy.opt.x_rule, "translate set rule: first:m | random:m");

    auto& split = make("split", "three-part dyadic split of the squared-deviation sum");
    split.cmd->add_option("--K", split.opt.split_k,
                          "split threshold (default: ceil((p/|A|)^(1/3)))");

    auto& charmoment = make("charmoment",
                            "fourth moment of character sums vs the nonzero solution count");
    (void)charmoment;

    CLI11_PARSE(app, argc, argv);

    for (const auto& sub : subs)
        if (sub->cmd->parsed()) return run_command(sub->cmd->get_name(), sub->opt);
    return 1;
}
