#include "sumprodlab.h"

#include <cstring>

#include "lab.hpp"

using namespace spl;

namespace {

static_assert(int(Errc::ok) == SPL_OK);
static_assert(int(Errc::invalid_argument) == SPL_E_INVALID_ARGUMENT);
static_assert(int(Errc::not_prime) == SPL_E_NOT_PRIME);
static_assert(int(Errc::too_large) == SPL_E_TOO_LARGE);
static_assert(int(Errc::bad_parameter) == SPL_E_BAD_PARAMETER);
static_assert(int(Errc::size_too_large) == SPL_E_SIZE_TOO_LARGE);
static_assert(int(Errc::zero_inverse) == SPL_E_ZERO_INVERSE);
static_assert(int(Errc::zero_dilation) == SPL_E_ZERO_DILATION);
static_assert(int(Errc::field_mismatch) == SPL_E_FIELD_MISMATCH);
static_assert(int(Errc::overflow_guard) == SPL_E_OVERFLOW_GUARD);
static_assert(int(Errc::empty_set) == SPL_E_EMPTY_SET);
static_assert(int(Errc::zero_in_set) == SPL_E_ZERO_IN_SET);
static_assert(int(Errc::budget_exceeded) == SPL_E_BUDGET_EXCEEDED);
static_assert(int(Errc::not_affine_image) == SPL_E_NOT_AFFINE_IMAGE);
static_assert(int(Errc::validation) == SPL_E_VALIDATION);
static_assert(int(Errc::io) == SPL_E_IO);
static_assert(int(Errc::all_trials_failed) == SPL_E_ALL_TRIALS_FAILED);
static_assert(int(Errc::buffer_too_small) == SPL_E_BUFFER_TOO_SMALL);
static_assert(int(Errc::internal) == SPL_E_INTERNAL);

thread_local std::string g_last_error = "no error";

spl_status set_error(Errc code, const std::string& msg) {
    g_last_error = msg;
    return spl_status(int(code));
}

template <typename Fn> spl_status guarded(Fn&& fn) {
    try {
        fn();
        return SPL_OK;
    } catch (const Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(Errc::too_large, "out of memory");
    } catch (const std::exception& e) {
        return set_error(Errc::internal, e.what());
    }
}

spl_status copy_text(const std::string& text, char* buf, size_t capacity) {
    if (buf == nullptr || capacity == 0)
        fail(Errc::invalid_argument, "null or empty output buffer");
    if (text.size() + 1 > capacity)
        fail(Errc::buffer_too_small, "need " + std::to_string(text.size() + 1) + " bytes");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return SPL_OK;
}

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::invalid_argument, what);
}

} // namespace

struct spl_field {
    FieldPtr field;
};

struct spl_set {
    FpSet set;
};

struct spl_spectrum {
    EnergySpectrum spectrum;
};

struct spl_config {
    lab::Config config;
};

extern "C" {

const char* spl_version(void) { return "0.1.0"; }

const char* spl_status_name(spl_status status) {
    switch (status) {
    case SPL_OK: return "ok";
    case SPL_E_INVALID_ARGUMENT: return "invalid argument";
    case SPL_E_NOT_PRIME: return "not prime";
    case SPL_E_TOO_LARGE: return "too large";
    case SPL_E_BAD_PARAMETER: return "bad parameter";
    case SPL_E_SIZE_TOO_LARGE: return "size too large";
    case SPL_E_ZERO_INVERSE: return "zero inverse";
    case SPL_E_ZERO_DILATION: return "zero dilation";
    case SPL_E_FIELD_MISMATCH: return "field mismatch";
    case SPL_E_OVERFLOW_GUARD: return "overflow guard";
    case SPL_E_EMPTY_SET: return "empty set";
    case SPL_E_ZERO_IN_SET: return "zero in set";
    case SPL_E_BUDGET_EXCEEDED: return "budget exceeded";
    case SPL_E_NOT_AFFINE_IMAGE: return "not an affine image";
    case SPL_E_VALIDATION: return "validation error";
    case SPL_E_IO: return "io error";
    case SPL_E_ALL_TRIALS_FAILED: return "all trials failed";
    case SPL_E_BUFFER_TOO_SMALL: return "buffer too small";
    case SPL_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* spl_last_error(void) { return g_last_error.c_str(); }

int spl_is_prime(uint64_t n) { return is_prime(n) ? 1 : 0; }

spl_status spl_field_create(uint64_t p, spl_field** out) {
    return spl_field_create_capped(p, default_table_cap, out);
}

spl_status spl_field_create_capped(uint64_t p, uint64_t table_cap, spl_field** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new spl_field{make_field(p, table_cap)};
    });
}

void spl_field_destroy(spl_field* field) { delete field; }

uint64_t spl_field_prime(const spl_field* field) { return field ? field->field->p() : 0; }

uint64_t spl_field_generator(const spl_field* field) {
    return field ? field->field->generator() : 0;
}

spl_status spl_field_exp(const spl_field* field, uint64_t k, uint64_t* out) {
    return guarded([&] {
        require(field && out, "null argument");
        const u64 p = field->field->p();
        if (k >= p - 1) fail(Errc::bad_parameter, "exponent outside Z_{p-1}");
        *out = field->field->exp(k);
    });
}

spl_status spl_field_dlog(const spl_field* field, uint64_t x, uint64_t* out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = field->field->dlog(x);
    });
}

spl_status spl_field_pow(const spl_field* field, uint64_t base, uint64_t e, uint64_t* out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = field->field->pow(base % field->field->p(), e);
    });
}

spl_status spl_field_inverse(const spl_field* field, uint64_t a, uint64_t* out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = field->field->inv(a % field->field->p());
    });
}

spl_status spl_set_from_elements(const spl_field* field, const uint64_t* elems, size_t count,
                                 spl_set** out) {
    return guarded([&] {
        require(field && out && (elems != nullptr || count == 0), "null argument");
        *out = new spl_set{FpSet::from_elements(field->field, std::span(elems, count))};
    });
}

spl_status spl_set_random(const spl_field* field, uint64_t n, uint64_t seed, spl_set** out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = new spl_set{FpSet::random_uniform(field->field, n, seed)};
    });
}

spl_status spl_set_interval(const spl_field* field, uint64_t a0, uint64_t n, spl_set** out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = new spl_set{FpSet::interval(field->field, a0, n)};
    });
}

spl_status spl_set_geometric(const spl_field* field, uint64_t ratio, uint64_t a0, uint64_t n,
                             spl_set** out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = new spl_set{FpSet::geometric(field->field, ratio, a0, n)};
    });
}

spl_status spl_set_subgroup(const spl_field* field, uint64_t d, spl_set** out) {
    return guarded([&] {
        require(field && out, "null argument");
        *out = new spl_set{FpSet::subgroup(field->field, d)};
    });
}

spl_status spl_set_affine_image(const spl_set* set, uint64_t lambda, uint64_t c, spl_set** out) {
    return guarded([&] {
        require(set && out, "null argument");
        *out = new spl_set{set->set.affine_image(lambda, c)};
    });
}

spl_status spl_set_pointwise_sum(const spl_set* a, const spl_set* b, char sign, spl_set** out) {
    return guarded([&] {
        require(a && b && out, "null argument");
        if (sign != '+' && sign != '-') fail(Errc::invalid_argument, "sign must be '+' or '-'");
        *out = new spl_set{pointwise_sum(a->set, b->set, sign == '+' ? Sign::plus : Sign::minus)};
    });
}

spl_status spl_set_pointwise_product(const spl_set* a, const spl_set* b, spl_set** out) {
    return guarded([&] {
        require(a && b && out, "null argument");
        *out = new spl_set{pointwise_product(a->set, b->set)};
    });
}

void spl_set_destroy(spl_set* set) { delete set; }

uint64_t spl_set_size(const spl_set* set) { return set ? set->set.size() : 0; }

int spl_set_contains(const spl_set* set, uint64_t x) {
    if (set == nullptr || x >= set->set.field().p()) return 0;
    return set->set.contains(x) ? 1 : 0;
}

spl_status spl_set_elements(const spl_set* set, uint64_t* buf, size_t capacity, size_t* written) {
    return guarded([&] {
        require(set != nullptr, "null set");
        const auto& elems = set->set.elements();
        if (written) *written = elems.size();
        if (elems.empty()) return;
        require(buf != nullptr, "null buffer");
        if (capacity < elems.size()) fail(Errc::buffer_too_small, "set has more elements than capacity");
        std::memcpy(buf, elems.data(), elems.size() * sizeof(uint64_t));
    });
}

spl_status spl_spectrum_create(const spl_set* set, spl_spectrum** out) {
    return guarded([&] {
        require(set && out, "null argument");
        *out = new spl_spectrum{energy_spectrum(set->set)};
    });
}

void spl_spectrum_destroy(spl_spectrum* spectrum) { delete spectrum; }

spl_status spl_spectrum_value(const spl_spectrum* spectrum, uint64_t xi, char* buf,
                              size_t capacity) {
    return guarded([&] {
        require(spectrum != nullptr, "null spectrum");
        if (xi == 0 || xi >= spectrum->spectrum.field().p())
            fail(Errc::bad_parameter, "xi outside F_p^*");
        copy_text(to_string_u128(spectrum->spectrum.at(xi)), buf, capacity);
    });
}

spl_status spl_additive_energy(const spl_set* set, uint64_t xi, char* buf, size_t capacity) {
    return guarded([&] {
        require(set != nullptr, "null set");
        copy_text(to_string_u128(additive_energy(set->set, xi)), buf, capacity);
    });
}

spl_status spl_mult_energy(const spl_set* set, uint64_t x, char* buf, size_t capacity) {
    return guarded([&] {
        require(set != nullptr, "null set");
        copy_text(to_string_u128(mult_energy(set->set, x)), buf, capacity);
    });
}

spl_status spl_bkt_check(const spl_set* set, spl_bkt_result* out) {
    return guarded([&] {
        require(set && out, "null argument");
        const auto check = bkt_check(set->set);
        copy_text(check.lhs.str(), out->lhs, sizeof(out->lhs));
        copy_text(check.rhs.str(), out->rhs, sizeof(out->rhs));
        out->equal = check.equal ? 1 : 0;
    });
}

spl_status spl_solution_count(const spl_set* a, const spl_set* b, const spl_set* c,
                              const spl_set* d, const char* signs, const char* method,
                              spl_count_result* out) {
    return guarded([&] {
        require(a && b && c && d && signs && method && out, "null argument");
        const Signs sg = lab::parse_signs(signs);
        CountMethod m;
        if (std::strcmp(method, "brute") == 0) m = CountMethod::brute;
        else if (std::strcmp(method, "repfn") == 0) m = CountMethod::repfn;
        else if (std::strcmp(method, "transform") == 0) m = CountMethod::transform;
        else fail(Errc::invalid_argument, "method must be brute, repfn, or transform");
        const auto rec = solution_count(a->set, b->set, c->set, d->set, sg, m);
        copy_text(to_string_u128(rec.n_total), out->n_total, sizeof(out->n_total));
        copy_text(to_string_u128(rec.n_zero), out->n_zero, sizeof(out->n_zero));
        copy_text(to_string_u128(rec.n_nonzero), out->n_nonzero, sizeof(out->n_nonzero));
        copy_text(rational_string(rec.main_term), out->main_term, sizeof(out->main_term));
        out->support_size = rec.support_size;
    });
}

spl_status spl_char_fourth_moment(const spl_set* set, char* buf, size_t capacity) {
    return guarded([&] {
        require(set != nullptr, "null set");
        copy_text(to_string_u128(char_fourth_moment(set->set)), buf, capacity);
    });
}

spl_status spl_config_create(const char* command, spl_config** out) {
    return guarded([&] {
        require(command && out, "null argument");
        auto* cfg = new spl_config{};
        cfg->config.command = lab::command_from_name(command);
        *out = cfg;
    });
}

void spl_config_destroy(spl_config* config) { delete config; }

spl_status spl_config_add_prime(spl_config* config, uint64_t p) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.primes.push_back(p);
    });
}

spl_status spl_config_set_family(spl_config* config, const char* descriptor) {
    return guarded([&] {
        require(config && descriptor, "null argument");
        config->config.family = descriptor;
    });
}

spl_status spl_config_set_size(spl_config* config, uint64_t n) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.size = lab::SizeRule{true, n, 0.0, 1.0};
    });
}

spl_status spl_config_set_size_rule(spl_config* config, double alpha, double constant) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.size = lab::SizeRule{false, 0, alpha, constant};
    });
}

spl_status spl_config_set_trials(spl_config* config, uint32_t trials) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.trials = trials;
    });
}

spl_status spl_config_set_seed(spl_config* config, uint64_t seed) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.base_seed = seed;
    });
}

spl_status spl_config_set_signs(spl_config* config, const char* signs) {
    return guarded([&] {
        require(config && signs, "null argument");
        config->config.signs = lab::parse_signs(signs);
    });
}

spl_status spl_config_set_method(spl_config* config, const char* method) {
    return guarded([&] {
        require(config && method, "null argument");
        config->config.method = method;
    });
}

spl_status spl_config_add_threshold(spl_config* config, const char* k) {
    return guarded([&] {
        require(config && k, "null argument");
        config->config.thresholds.push_back(lab::parse_rational(k));
    });
}

spl_status spl_config_set_split_threshold(spl_config* config, const char* k) {
    return guarded([&] {
        require(config && k, "null argument");
        config->config.split_threshold = lab::parse_rational(k);
    });
}

spl_status spl_config_set_dilate_rule(spl_config* config, const char* rule) {
    return guarded([&] {
        require(config && rule, "null argument");
        config->config.dilate_rule = rule;
    });
}

spl_status spl_config_set_affine_bcd(spl_config* config, int enabled) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.affine_bcd = enabled != 0;
    });
}

spl_status spl_config_set_output(spl_config* config, const char* path, const char* format) {
    return guarded([&] {
        require(config && path && format, "null argument");
        config->config.out_path = path;
        if (std::strcmp(format, "csv") == 0) config->config.format = lab::OutputFormat::csv;
        else if (std::strcmp(format, "jsonl") == 0) config->config.format = lab::OutputFormat::jsonl;
        else fail(Errc::validation, "format must be csv or jsonl");
    });
}

spl_status spl_config_set_threads(spl_config* config, uint32_t threads) {
    return guarded([&] {
        require(config != nullptr, "null config");
        config->config.threads = threads;
    });
}

spl_status spl_run(const spl_config* config, spl_run_stats* stats) {
    return guarded([&] {
        require(config != nullptr, "null config");
        if (config->config.out_path.empty()) fail(Errc::validation, "output path not set");
        const auto st = lab::run_to_file(config->config);
        if (stats) {
            stats->rows = st.rows;
            stats->trials_total = st.trials_total;
            stats->trials_failed = st.trials_failed;
        }
    });
}

} // extern "C"
