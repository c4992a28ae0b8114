#include "lab.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rng.hpp"

namespace spl::lab {

namespace {

struct FamilySpec {
    enum class Kind { random, interval, geometric, subgroup, explicit_list } kind;
    u64 a0 = 0;
    u64 ratio = 0;
    u64 order = 0;
    std::vector<u64> elements;
};

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

u64 parse_u64(const std::string& text, const std::string& what) {
    u64 value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(Errc::validation, "bad " + what + ": '" + text + "'");
    return value;
}

FamilySpec parse_family(const std::string& family) {
    FamilySpec spec{FamilySpec::Kind::random, 0, 0, 0, {}};
    const auto colon = family.find(':');
    const std::string head = family.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : family.substr(colon + 1);
    if (head == "random") {
        if (!args.empty()) fail(Errc::validation, "random family takes no parameters");
        spec.kind = FamilySpec::Kind::random;
    } else if (head == "interval") {
        spec.kind = FamilySpec::Kind::interval;
        spec.a0 = parse_u64(args, "interval start");
    } else if (head == "geometric") {
        spec.kind = FamilySpec::Kind::geometric;
        auto parts = split_list(args, ',');
        if (parts.size() != 2) fail(Errc::validation, "geometric family needs ratio,a0");
        spec.ratio = parse_u64(parts[0], "geometric ratio");
        spec.a0 = parse_u64(parts[1], "geometric start");
    } else if (head == "subgroup") {
        spec.kind = FamilySpec::Kind::subgroup;
        spec.order = parse_u64(args, "subgroup order");
    } else if (head == "explicit") {
        spec.kind = FamilySpec::Kind::explicit_list;
        for (const auto& part : split_list(args, ','))
            spec.elements.push_back(parse_u64(part, "element"));
    } else {
        fail(Errc::validation, "unknown set family '" + family + "'");
    }
    return spec;
}

struct DilateRule {
    bool random = false;
    u64 count = 0;
};

DilateRule parse_dilate_rule(const std::string& rule) {
    const auto colon = rule.find(':');
    if (colon == std::string::npos) fail(Errc::validation, "dilate rule needs first:m or random:m");
    const std::string head = rule.substr(0, colon);
    DilateRule out;
    out.count = parse_u64(rule.substr(colon + 1), "dilate count");
    if (out.count == 0) fail(Errc::validation, "dilate count must be positive");
    if (head == "first")
        out.random = false;
    else if (head == "random")
        out.random = true;
    else
        fail(Errc::validation, "unknown dilate rule '" + rule + "'");
    return out;
}

// Random m-subset of F_p^*, independent of the set draw.
FpSet random_nonzero_subset(const FieldPtr& field, u64 m, u64 seed) {
    const u64 p = field->p();
    if (m > p - 1) fail(Errc::size_too_large, "dilate set larger than F_p^*");
    Xoshiro256ss rng(seed);
    std::unordered_map<u64, u64> moved;
    std::vector<u64> out;
    out.reserve(m);
    const u64 span = p - 1;
    for (u64 i = 0; i < m; ++i) {
        u64 j = i + rng.below(span - i);
        u64 vj = moved.count(j) ? moved[j] : j;
        u64 vi = moved.count(i) ? moved[i] : i;
        moved[j] = vi;
        out.push_back(vj + 1);
    }
    return FpSet::from_elements(field, out);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

const std::vector<std::string> kCommonColumns = {"p", "family", "n", "seed", "trial", "error"};

std::vector<std::string> with_common(std::initializer_list<std::string> extra) {
    std::vector<std::string> cols = kCommonColumns;
    cols.insert(cols.end(), extra.begin(), extra.end());
    return cols;
}

struct TrialContext {
    const Config* config;
    FieldPtr field;
    u64 trial_index;
    u64 seed;
    FpSet set;

    Record base_record(u64 realized_n) const {
        Record rec;
        rec.set("p", u64(field->p()));
        rec.set("family", config->family);
        rec.set("n", realized_n);
        rec.set("seed", seed);
        rec.set("trial", trial_index);
        return rec;
    }
};

void rows_bkt(const TrialContext& ctx, std::vector<Record>& out) {
    const auto spectrum = energy_spectrum(ctx.set);
    const auto check = bkt_check(spectrum);
    const auto corollary = bkt_corollary_full(spectrum);
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("bkt_lhs", check.lhs);
    rec.set("bkt_rhs", check.rhs);
    rec.set("bkt_equal", check.equal);
    rec.set("corollary_lhs", corollary.lhs);
    rec.set("corollary_bound", corollary.bound);
    rec.set("corollary_holds", corollary.holds);
    out.push_back(std::move(rec));
}

void rows_spectrum(const TrialContext& ctx, std::vector<Record>& out) {
    const auto spectrum = energy_spectrum(ctx.set);
    const BigInt n(ctx.set.size());
    const BigInt p(ctx.field->p());
    const BigInt e_min = to_bigint(spectrum.min_value());
    const BigInt e_max = to_bigint(spectrum.max_value());
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("e_min", e_min);
    rec.set("e_max", e_max);
    rec.set("e_sum", spectrum.sum());
    rec.set("mean_floor", spectrum.mean_floor());
    rec.set("diag_ok", e_min >= n * n);
    rec.set("cap_ok", e_max <= n * n * n);
    rec.set("floor_ok", p * e_min >= n * n * n * n);
    out.push_back(std::move(rec));
}

struct QuadSets {
    FpSet b, c, d;
};

QuadSets make_bcd(const TrialContext& ctx) {
    if (!ctx.config->affine_bcd) return {ctx.set, ctx.set, ctx.set};
    const u64 p = ctx.field->p();
    Xoshiro256ss rng(derive_seed(ctx.seed, 0xBCDull));
    auto image = [&] {
        u64 lambda = 1 + rng.below(p - 1);
        u64 c = rng.below(p);
        return ctx.set.affine_image(lambda, c);
    };
    FpSet b = image(), c = image(), d = image();
    return {std::move(b), std::move(c), std::move(d)};
}

const char* method_name(CountMethod m) {
    switch (m) {
    case CountMethod::brute: return "brute";
    case CountMethod::repfn: return "repfn";
    case CountMethod::transform: return "transform";
    }
    return "?";
}

void rows_count(const TrialContext& ctx, std::vector<Record>& out) {
    const QuadSets quad = make_bcd(ctx);
    std::vector<CountMethod> methods;
    if (ctx.config->method == "all")
        methods = {CountMethod::brute, CountMethod::repfn, CountMethod::transform};
    else if (ctx.config->method == "brute")
        methods = {CountMethod::brute};
    else if (ctx.config->method == "repfn")
        methods = {CountMethod::repfn};
    else
        methods = {CountMethod::transform};

    struct Outcome {
        CountMethod method;
        std::optional<SolutionCountRecord> record;
        std::string error;
    };
    std::vector<Outcome> outcomes;
    for (CountMethod m : methods) {
        Outcome o{m, {}, {}};
        try {
            o.record = solution_count(ctx.set, quad.b, quad.c, quad.d, ctx.config->signs, m);
        } catch (const Error& e) {
            o.error = e.what(); // e.g. brute over its quadruple budget
        }
        outcomes.push_back(std::move(o));
    }

    std::optional<bool> agree;
    if (methods.size() > 1) {
        const SolutionCountRecord* first = nullptr;
        agree = true;
        for (const auto& o : outcomes) {
            if (!o.record) continue;
            if (!first) {
                first = &*o.record;
            } else if (o.record->n_total != first->n_total || o.record->n_zero != first->n_zero ||
                       o.record->support_size != first->support_size) {
                agree = false;
            }
        }
    }

    const double scale = std::pow(double(ctx.field->p()), 2.0 / 3.0) *
                         std::pow(double(ctx.set.size()), 16.0 / 3.0);
    for (const auto& o : outcomes) {
        Record rec = ctx.base_record(ctx.set.size());
        rec.set("method", std::string(method_name(o.method)));
        if (o.record) {
            rec.set("n_total", to_bigint(o.record->n_total));
            rec.set("n_zero", to_bigint(o.record->n_zero));
            rec.set("n_nonzero", to_bigint(o.record->n_nonzero));
            rec.set("support_size", o.record->support_size);
            rec.set("main_term", o.record->main_term);
            rec.set("main_ratio",
                    to_double(Rational(to_bigint(o.record->n_total)) / o.record->main_term));
            const double residual =
                (Rational(to_bigint(o.record->n_total)) - o.record->main_term).convert_to<double>();
            rec.set("residual_ratio", scale > 0 ? residual / scale : 0.0);
            if (agree.has_value()) rec.set("methods_agree", *agree);
        } else {
            rec.set("error", o.error);
        }
        out.push_back(std::move(rec));
    }
}

void rows_sweep(const TrialContext& ctx, std::vector<Record>& out) {
    const QuadSets quad = make_bcd(ctx);
    const auto rep = diff_product_rep(ctx.set, quad.b, quad.c, quad.d, ctx.config->signs);
    u64 support = rep.support_size();
    u128 n_total = 0;
    for (u128 v : rep.values())
        if (v != 0) n_total = checked_add(n_total, checked_mul(v, v));

    const auto spectrum = energy_spectrum(ctx.set);
    const auto check = bkt_check(spectrum);
    const auto exi2 = exi2_check(spectrum);

    const u64 p = ctx.field->p();
    const u128 mass = u128(ctx.set.size()) * quad.b.size() * quad.c.size() * quad.d.size();
    const Rational main_term(to_bigint(mass) * to_bigint(mass), BigInt(p));

    Record rec = ctx.base_record(ctx.set.size());
    rec.set("support_size", support);
    rec.set("support_ratio", double(support) / double(p));
    rec.set("above_half_p", 2 * support > p);
    rec.set("n_total", to_bigint(n_total));
    rec.set("main_ratio", to_double(Rational(to_bigint(n_total)) / main_term));
    rec.set("bkt_equal", check.equal);
    rec.set("exi2_identity", exi2.identity_holds);
    rec.set("exi2_bound", exi2.lemma_bound_holds);
    out.push_back(std::move(rec));
}

void rows_census(const TrialContext& ctx, std::vector<Record>& out) {
    const auto spectrum = energy_spectrum(ctx.set);
    const auto corollary = bkt_corollary_full(spectrum);
    for (const auto& k : ctx.config->thresholds) {
        const auto census = dyadic_census(spectrum, k);
        Record rec = ctx.base_record(ctx.set.size());
        rec.set("K", k);
        rec.set("k_buckets", u64(census.bucket_count));
        std::string buckets;
        for (size_t i = 0; i < census.bucket_sizes.size(); ++i) {
            if (i) buckets.push_back(';');
            buckets += std::to_string(census.bucket_sizes[i]);
        }
        rec.set("bucket_sizes", buckets);
        rec.set("below_all_buckets", census.below_all_buckets);
        rec.set("over_threshold_count", census.over_threshold_count);
        const double k4 = std::pow(to_double(k), 4.0);
        rec.set("over_ratio_k4", k4 > 0 ? double(census.over_threshold_count) / k4 : 0.0);
        rec.set("k_le_p_over_n", census.k_le_p_over_n);
        rec.set("k_le_sqrt_n", census.k_le_sqrt_n);
        rec.set("corollary_holds", corollary.holds);
        out.push_back(std::move(rec));
    }
}

FpSet build_dilates(const TrialContext& ctx) {
    const auto rule = parse_dilate_rule(ctx.config->dilate_rule);
    const u64 p = ctx.field->p();
    if (rule.random) return random_nonzero_subset(ctx.field, rule.count, derive_seed(ctx.seed, 0xD11ull));
    if (rule.count > p - 1) fail(Errc::size_too_large, "dilate set larger than F_p^*");
    std::vector<u64> xs(rule.count);
    for (u64 i = 0; i < rule.count; ++i) xs[i] = i + 1;
    return FpSet::from_elements(ctx.field, xs);
}

void rows_rudnev(const TrialContext& ctx, std::vector<Record>& out) {
    const FpSet x = build_dilates(ctx);
    const auto report = rudnev_lhs_rhs(ctx.set, x);
    const auto line = line_solution_count(ctx.set, x);
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("x_rule", ctx.config->dilate_rule);
    rec.set("x_size", x.size());
    rec.set("lhs", report.lhs);
    rec.set("bound_a", report.bound_a);
    rec.set("bound_b", report.bound_b);
    rec.set("ratio_a", report.ratio_a);
    rec.set("ratio_b", report.ratio_b);
    rec.set("precondition_ratio", report.precondition_ratio);
    rec.set("line_count", to_bigint(line.count));
    rec.set("line_bound", line.comparison_bound);
    rec.set("line_ratio", line.ratio);
    out.push_back(std::move(rec));
}

void rows_murphy(const TrialContext& ctx, std::vector<Record>& out) {
    const FpSet x = build_dilates(ctx);
    const auto report = murphy_lhs_rhs(ctx.set, x);
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("x_rule", ctx.config->dilate_rule);
    rec.set("x_size", x.size());
    rec.set("lhs", report.lhs);
    rec.set("bound_a", report.bound_a);
    rec.set("bound_b", report.bound_b);
    rec.set("ratio_a", report.ratio_a);
    rec.set("ratio_b", report.ratio_b);
    rec.set("precondition_ratio", report.precondition_ratio);
    out.push_back(std::move(rec));
}

void rows_split(const TrialContext& ctx, std::vector<Record>& out) {
    const auto report = proposition_split(ctx.set, ctx.config->split_threshold);
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("K", report.threshold_k);
    rec.set("very_small_sum", report.very_small_sum);
    rec.set("small_sum", report.small_sum);
    rec.set("large_sum", report.large_sum);
    rec.set("total_dev_sum", Rational(report.small_sum + report.large_sum));
    rec.set("term_vsmall", report.term_vsmall);
    rec.set("term_small", report.term_small);
    rec.set("term_large", report.term_large);
    rec.set("ratio_vsmall", report.ratio_vsmall);
    rec.set("ratio_small", report.ratio_small);
    rec.set("ratio_large", report.ratio_large);
    out.push_back(std::move(rec));
}

void rows_charmoment(const TrialContext& ctx, std::vector<Record>& out) {
    const u128 moment = char_fourth_moment(ctx.set);
    const auto rec_count = solution_count(ctx.set, ctx.set, ctx.set, ctx.set,
                                          Signs{Sign::minus, Sign::minus}, CountMethod::transform);
    Record rec = ctx.base_record(ctx.set.size());
    rec.set("char_fourth_moment", to_bigint(moment));
    rec.set("n_nonzero", to_bigint(rec_count.n_nonzero));
    rec.set("equal", moment == rec_count.n_nonzero);
    out.push_back(std::move(rec));
}

std::vector<Record> run_trial(const Config& config, const FieldPtr& field, u64 trial_index) {
    const u64 seed = derive_seed(config.base_seed, trial_index);
    std::vector<Record> rows;
    try {
        const u64 target = config.size.realize(field->p());
        FpSet set = build_family_set(field, config.family, target, seed);
        TrialContext ctx{&config, field, trial_index, seed, std::move(set)};
        switch (config.command) {
        case Command::bkt: rows_bkt(ctx, rows); break;
        case Command::spectrum: rows_spectrum(ctx, rows); break;
        case Command::count: rows_count(ctx, rows); break;
        case Command::sweep: rows_sweep(ctx, rows); break;
        case Command::census: rows_census(ctx, rows); break;
        case Command::rudnev: rows_rudnev(ctx, rows); break;
        case Command::murphy: rows_murphy(ctx, rows); break;
        case Command::split: rows_split(ctx, rows); break;
        case Command::charmoment: rows_charmoment(ctx, rows); break;
        }
    } catch (const std::exception& e) {
        Record rec;
        rec.set("p", u64(field->p()));
        rec.set("family", config.family);
        rec.set("seed", seed);
        rec.set("trial", trial_index);
        rec.set("error", std::string(e.what()));
        rows.push_back(std::move(rec));
    }
    return rows;
}

} // namespace

Command command_from_name(const std::string& name) {
    if (name == "bkt") return Command::bkt;
    if (name == "spectrum") return Command::spectrum;
    if (name == "count") return Command::count;
    if (name == "sweep") return Command::sweep;
    if (name == "census") return Command::census;
    if (name == "rudnev") return Command::rudnev;
    if (name == "murphy") return Command::murphy;
    if (name == "split") return Command::split;
    if (name == "charmoment") return Command::charmoment;
    fail(Errc::validation, "unknown command '" + name + "'");
}

const char* command_name(Command c) {
    switch (c) {
    case Command::bkt: return "bkt";
    case Command::spectrum: return "spectrum";
    case Command::count: return "count";
    case Command::sweep: return "sweep";
    case Command::census: return "census";
    case Command::rudnev: return "rudnev";
    case Command::murphy: return "murphy";
    case Command::split: return "split";
    case Command::charmoment: return "charmoment";
    }
    return "?";
}

u64 SizeRule::realize(u64 p) const {
    if (absolute) return n;
    const double raw = std::ceil(constant * std::pow(double(p), alpha));
    if (raw < 1.0) return 1;
    if (raw >= double(p)) return p;
    return u64(raw);
}

const std::vector<std::string>& schema(Command c) {
    static const std::vector<std::string> bkt = with_common(
        {"bkt_lhs", "bkt_rhs", "bkt_equal", "corollary_lhs", "corollary_bound", "corollary_holds"});
    static const std::vector<std::string> spectrum = with_common(
        {"e_min", "e_max", "e_sum", "mean_floor", "diag_ok", "cap_ok", "floor_ok"});
    static const std::vector<std::string> count =
        with_common({"method", "n_total", "n_zero", "n_nonzero", "support_size", "main_term",
                     "main_ratio", "residual_ratio", "methods_agree"});
    static const std::vector<std::string> sweep =
        with_common({"support_size", "support_ratio", "above_half_p", "n_total", "main_ratio",
                     "bkt_equal", "exi2_identity", "exi2_bound"});
    static const std::vector<std::string> census = with_common(
        {"K", "k_buckets", "bucket_sizes", "below_all_buckets", "over_threshold_count",
         "over_ratio_k4", "k_le_p_over_n", "k_le_sqrt_n", "corollary_holds"});
    static const std::vector<std::string> rudnev =
        with_common({"x_rule", "x_size", "lhs", "bound_a", "bound_b", "ratio_a", "ratio_b",
                     "precondition_ratio", "line_count", "line_bound", "line_ratio"});
    static const std::vector<std::string> murphy = with_common(
        {"x_rule", "x_size", "lhs", "bound_a", "bound_b", "ratio_a", "ratio_b",
         "precondition_ratio"});
    static const std::vector<std::string> split = with_common(
        {"K", "very_small_sum", "small_sum", "large_sum", "total_dev_sum", "term_vsmall",
         "term_small", "term_large", "ratio_vsmall", "ratio_small", "ratio_large"});
    static const std::vector<std::string> charmoment =
        with_common({"char_fourth_moment", "n_nonzero", "equal"});
    switch (c) {
    case Command::bkt: return bkt;
    case Command::spectrum: return spectrum;
    case Command::count: return count;
    case Command::sweep: return sweep;
    case Command::census: return census;
    case Command::rudnev: return rudnev;
    case Command::murphy: return murphy;
    case Command::split: return split;
    case Command::charmoment: return charmoment;
    }
    fail(Errc::internal, "unknown command schema");
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den == 0) fail(Errc::validation, "zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Errc::validation, "bad rational '" + text + "'");
    }
}

Signs parse_signs(const std::string& text) {
    if (text.size() != 2 || (text[0] != 'm' && text[0] != 'p') || (text[1] != 'm' && text[1] != 'p'))
        fail(Errc::validation, "signs must be one of mm, mp, pm, pp");
    return Signs{text[0] == 'p' ? Sign::plus : Sign::minus,
                 text[1] == 'p' ? Sign::plus : Sign::minus};
}

FpSet build_family_set(const FieldPtr& field, const std::string& family, u64 target_size, u64 seed) {
    const FamilySpec spec = parse_family(family);
    switch (spec.kind) {
    case FamilySpec::Kind::random: return FpSet::random_uniform(field, target_size, seed);
    case FamilySpec::Kind::interval: return FpSet::interval(field, spec.a0, target_size);
    case FamilySpec::Kind::geometric:
        return FpSet::geometric(field, spec.ratio, spec.a0, target_size);
    case FamilySpec::Kind::subgroup: return FpSet::subgroup(field, spec.order);
    case FamilySpec::Kind::explicit_list: return FpSet::from_elements(field, spec.elements);
    }
    fail(Errc::internal, "unreachable family kind");
}

void validate(const Config& config) {
    if (config.primes.empty()) fail(Errc::validation, "at least one prime is required");
    for (u64 p : config.primes)
        if (!is_prime(p)) fail(Errc::validation, std::to_string(p) + " is not prime");
    if (config.trials < 1) fail(Errc::validation, "trials must be at least 1");
    if (!config.size.absolute) {
        if (!(config.size.alpha > 0.0 && config.size.alpha <= 1.0))
            fail(Errc::validation, "size exponent must satisfy 0 < alpha <= 1");
        if (!(config.size.constant > 0.0)) fail(Errc::validation, "size constant must be positive");
    } else if (config.size.n < 1) {
        const FamilySpec spec = parse_family(config.family);
        if (spec.kind == FamilySpec::Kind::random || spec.kind == FamilySpec::Kind::interval ||
            spec.kind == FamilySpec::Kind::geometric)
            fail(Errc::validation, "set size must be at least 1");
    }
    parse_family(config.family);
    if (config.command == Command::count && config.method != "brute" && config.method != "repfn" &&
        config.method != "transform" && config.method != "all")
        fail(Errc::validation, "method must be brute, repfn, transform, or all");
    if (config.command == Command::census) {
        if (config.thresholds.empty()) fail(Errc::validation, "census needs at least one K");
        for (const auto& k : config.thresholds)
            if (k < 1) fail(Errc::validation, "census K must be at least 1");
    }
    if (config.split_threshold && *config.split_threshold < 1)
        fail(Errc::validation, "split K must be at least 1");
    if (config.command == Command::rudnev || config.command == Command::murphy)
        parse_dilate_rule(config.dilate_rule);
}

std::vector<Record> run(const Config& config, RunStats* stats) {
    // Build fields up front: table construction is single-threaded and any
    // failure (non-prime, over cap) is a validation-stage error.
    std::vector<FieldPtr> fields;
    fields.reserve(config.primes.size());
    for (u64 p : config.primes) fields.push_back(make_field(p));

    struct Task {
        size_t field_index;
        u64 trial;
    };
    std::vector<Task> tasks;
    for (size_t fi = 0; fi < fields.size(); ++fi)
        for (u64 t = 0; t < config.trials; ++t) tasks.push_back({fi, t});

    std::vector<std::vector<Record>> slots(tasks.size());
    std::atomic<size_t> next{0};
    u32 thread_count = config.threads;
    if (thread_count == 0) {
        const u32 hw = std::max(1u, std::thread::hardware_concurrency());
        thread_count = u32(std::min<size_t>(hw, tasks.size()));
    }
    thread_count = u32(std::min<size_t>(thread_count, tasks.size()));

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            slots[i] = run_trial(config, fields[tasks[i].field_index], tasks[i].trial);
        }
    };
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (u32 i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<Record> records;
    u64 failed = 0;
    for (auto& rows : slots) {
        bool trial_failed = false;
        for (auto& rec : rows) {
            auto it = rec.cells.find("error");
            if (it != rec.cells.end() && !std::holds_alternative<std::monostate>(it->second))
                trial_failed = true;
            records.push_back(std::move(rec));
        }
        if (trial_failed) ++failed;
    }
    if (stats) {
        stats->rows = records.size();
        stats->trials_total = tasks.size();
        stats->trials_failed = failed;
    }
    return records;
}

std::string value_to_text(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) return "";
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const u64* u = std::get_if<u64>(&v)) return std::to_string(*u);
    if (const double* d = std::get_if<double>(&v)) return format_double(*d);
    if (const BigInt* i = std::get_if<BigInt>(&v)) return i->str();
    if (const Rational* r = std::get_if<Rational>(&v)) return rational_string(*r);
    return std::get<std::string>(v);
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char ch : cell) {
        if (ch == '"') quoted += "\"\"";
        else quoted.push_back(ch);
    }
    quoted.push_back('"');
    return quoted;
}

void emit(const std::vector<Record>& records, Command command, OutputFormat format,
          std::ostream& out) {
    const auto& columns = schema(command);
    if (format == OutputFormat::csv) {
        for (size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ',';
            out << columns[i];
        }
        out << '\n';
        for (const auto& rec : records) {
            for (size_t i = 0; i < columns.size(); ++i) {
                if (i) out << ',';
                auto it = rec.cells.find(columns[i]);
                if (it != rec.cells.end()) out << csv_escape(value_to_text(it->second));
            }
            out << '\n';
        }
        return;
    }
    for (const auto& rec : records) {
        nlohmann::ordered_json obj;
        for (const auto& col : columns) {
            auto it = rec.cells.find(col);
            if (it == rec.cells.end() || std::holds_alternative<std::monostate>(it->second)) {
                obj[col] = nullptr;
            } else if (const bool* b = std::get_if<bool>(&it->second)) {
                obj[col] = *b;
            } else if (const double* d = std::get_if<double>(&it->second)) {
                obj[col] = *d;
            } else {
                obj[col] = value_to_text(it->second);
            }
        }
        out << obj.dump() << '\n';
    }
}

RunStats run_to_file(const Config& config) {
    validate(config);
    RunStats stats;
    const auto records = run(config, &stats);
    if (config.out_path == "-") {
        emit(records, config.command, config.format, std::cout);
        std::cout.flush();
    } else {
        std::ofstream out(config.out_path, std::ios::binary);
        if (!out) fail(Errc::io, "cannot open '" + config.out_path + "' for writing");
        emit(records, config.command, config.format, out);
        if (!out) fail(Errc::io, "write failure on '" + config.out_path + "'");
    }
    if (stats.trials_total > 0 && stats.trials_failed == stats.trials_total)
        fail(Errc::all_trials_failed, "every trial failed; see the error column");
    return stats;
}

} // namespace spl::lab
