#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lab.hpp"

using namespace spl;
using namespace spl::lab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

Config base_config(Command cmd) {
    Config cfg;
    cfg.command = cmd;
    cfg.primes = {5};
    cfg.family = "explicit:1,2";
    cfg.size = SizeRule{true, 2, 0.0, 1.0};
    cfg.trials = 1;
    cfg.base_seed = 7;
    return cfg;
}

} // namespace

TEST_CASE("validation rejects broken configs") {
    Config cfg = base_config(Command::sweep);
    cfg.trials = 0;
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::sweep);
    cfg.primes = {10};
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::sweep);
    cfg.primes.clear();
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::sweep);
    cfg.size = SizeRule{false, 0, 1.5, 1.0}; // alpha > 1
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::sweep);
    cfg.family = "nonsense";
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::census);
    cfg.thresholds = {};
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::count);
    cfg.method = "psychic";
    CHECK_THROWS_AS(validate(cfg), Error);

    cfg = base_config(Command::rudnev);
    cfg.dilate_rule = "all-of-them";
    CHECK_THROWS_AS(validate(cfg), Error);

    CHECK_NOTHROW(validate(base_config(Command::sweep)));
}

TEST_CASE("family descriptor grammar") {
    auto f7 = make_field(7);
    CHECK(build_family_set(f7, "explicit:1,2,4", 0, 1).elements() == std::vector<u64>{1, 2, 4});
    CHECK(build_family_set(f7, "interval:2", 3, 1).elements() == std::vector<u64>{2, 3, 4});
    CHECK(build_family_set(f7, "geometric:3,1", 3, 1).elements() == std::vector<u64>{1, 2, 3});
    CHECK(build_family_set(f7, "subgroup:3", 0, 1).elements() == std::vector<u64>{1, 2, 4});
    CHECK(build_family_set(f7, "random", 4, 99).size() == 4);
    CHECK_THROWS_AS(build_family_set(f7, "geometric:3", 3, 1), Error);
    CHECK_THROWS_AS(build_family_set(f7, "interval:x", 3, 1), Error);
}

TEST_CASE("size rule realization") {
    SizeRule abs{true, 40, 0.0, 1.0};
    CHECK(abs.realize(101) == 40);
    SizeRule rule{false, 0, 0.625, 4.0}; // ceil(4 * p^{5/8})
    CHECK(rule.realize(10007) == 1266);
    SizeRule clamp{false, 0, 1.0, 2.0};
    CHECK(clamp.realize(101) == 101); // clamped to p
}

TEST_CASE("sweep over explicit family reproduces frozen values") {
    Config cfg = base_config(Command::sweep);
    RunStats stats;
    const auto records = run(cfg, &stats);
    REQUIRE(records.size() == 1);
    CHECK(stats.trials_failed == 0);
    const auto& rec = records[0];
    CHECK(value_to_text(rec.cells.at("support_size")) == "3");
    CHECK(value_to_text(rec.cells.at("n_total")) == "152");
    CHECK(value_to_text(rec.cells.at("bkt_equal")) == "true");
    CHECK(value_to_text(rec.cells.at("exi2_identity")) == "true");
    CHECK(value_to_text(rec.cells.at("above_half_p")) == "true");
}

TEST_CASE("count command: all three methods in one trial") {
    Config cfg = base_config(Command::count);
    cfg.method = "all";
    const auto records = run(cfg);
    REQUIRE(records.size() == 3);
    for (const auto& rec : records) {
        CHECK(value_to_text(rec.cells.at("n_total")) == "152");
        CHECK(value_to_text(rec.cells.at("methods_agree")) == "true");
        CHECK(value_to_text(rec.cells.at("main_term")) == "256/5");
    }
}

TEST_CASE("census rows carry exact rational serialization") {
    Config cfg = base_config(Command::census);
    cfg.thresholds = {Rational(2), Rational(7, 2)};
    const auto records = run(cfg);
    REQUIRE(records.size() == 2);
    CHECK(value_to_text(records[0].cells.at("K")) == "2/1");
    CHECK(value_to_text(records[0].cells.at("over_threshold_count")) == "2");
    CHECK(value_to_text(records[1].cells.at("K")) == "7/2");
}

TEST_CASE("split row reproduces the exact rational example") {
    Config cfg = base_config(Command::split);
    cfg.split_threshold = Rational(2);
    const auto records = run(cfg);
    REQUIRE(records.size() == 1);
    CHECK(value_to_text(records[0].cells.at("very_small_sum")) == "32/25");
    CHECK(value_to_text(records[0].cells.at("large_sum")) == "392/25");
    CHECK(value_to_text(records[0].cells.at("total_dev_sum")) == "424/25");
}

TEST_CASE("failed trials produce error rows, sweep continues") {
    Config cfg = base_config(Command::count);
    cfg.primes = {101};
    cfg.family = "random";
    cfg.size = SizeRule{true, 100, 0.0, 1.0};
    cfg.method = "brute"; // 100^4 quadruples blows the budget
    cfg.trials = 2;
    RunStats stats;
    const auto records = run(cfg, &stats);
    REQUIRE(records.size() == 2);
    CHECK(stats.trials_failed == 2);
    for (const auto& rec : records) {
        CHECK(value_to_text(rec.cells.at("error")).find("budget") != std::string::npos);
    }
}

TEST_CASE("csv emission: header, quoting, LF endings") {
    Config cfg = base_config(Command::sweep);
    std::ostringstream out;
    emit({}, cfg.command, OutputFormat::csv, out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 1); // header only
    CHECK(lines[0].rfind("p,family,n,seed,trial,error,", 0) == 0);

    // descriptor with a comma must be quoted
    CHECK(csv_escape("geometric:3,1") == "\"geometric:3,1\"");
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("emit a two-line csv for one record") {
    Config cfg = base_config(Command::charmoment);
    const auto records = run(cfg);
    std::ostringstream out;
    emit(records, cfg.command, OutputFormat::csv, out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].find("8,8,true") != std::string::npos); // moment equals n_nonzero
}

TEST_CASE("jsonl emission is one object per line with exact strings") {
    Config cfg = base_config(Command::split);
    cfg.split_threshold = Rational(2);
    cfg.format = OutputFormat::jsonl;
    const auto records = run(cfg);
    std::ostringstream out;
    emit(records, cfg.command, OutputFormat::jsonl, out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].find("\"very_small_sum\":\"32/25\"") != std::string::npos);
    CHECK(lines[0].front() == '{');
}

TEST_CASE("reruns are byte-identical, independent of thread count") {
    Config cfg = base_config(Command::sweep);
    cfg.primes = {101, 103};
    cfg.family = "random";
    cfg.size = SizeRule{true, 30, 0.0, 1.0};
    cfg.trials = 6;

    const auto path_a = temp_file("spl_det_a.csv");
    const auto path_b = temp_file("spl_det_b.csv");
    cfg.threads = 1;
    cfg.out_path = path_a.string();
    run_to_file(cfg);
    cfg.threads = 4;
    cfg.out_path = path_b.string();
    run_to_file(cfg);
    const auto a = slurp(path_a.string());
    const auto b = slurp(path_b.string());
    CHECK(a == b);
    CHECK(a.find("error") != std::string::npos); // header names it
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);
}

TEST_CASE("row order is (prime, trial) regardless of completion order") {
    Config cfg = base_config(Command::bkt);
    cfg.primes = {101, 5};
    cfg.family = "random";
    cfg.size = SizeRule{true, 3, 0.0, 1.0};
    cfg.trials = 3;
    cfg.threads = 4;
    const auto records = run(cfg);
    REQUIRE(records.size() == 6);
    const std::vector<std::pair<std::string, std::string>> expect = {
        {"101", "0"}, {"101", "1"}, {"101", "2"}, {"5", "0"}, {"5", "1"}, {"5", "2"}};
    for (size_t i = 0; i < 6; ++i) {
        CHECK(value_to_text(records[i].cells.at("p")) == expect[i].first);
        CHECK(value_to_text(records[i].cells.at("trial")) == expect[i].second);
    }
}

TEST_CASE("all trials failing surfaces as an error from run_to_file") {
    Config cfg = base_config(Command::count);
    cfg.primes = {101};
    cfg.family = "random";
    cfg.size = SizeRule{true, 100, 0.0, 1.0};
    cfg.method = "brute";
    cfg.out_path = temp_file("spl_allfail.csv").string();
    try {
        run_to_file(cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::all_trials_failed);
    }
    // the file still exists with the error rows
    CHECK(slurp(cfg.out_path).find("budget") != std::string::npos);
    std::filesystem::remove(cfg.out_path);
}

TEST_CASE("exact cells round-trip through their serialization") {
    Config cfg = base_config(Command::split);
    cfg.primes = {101};
    cfg.family = "random";
    cfg.size = SizeRule{true, 23, 0.0, 1.0};
    cfg.split_threshold = Rational(7, 2);
    const auto records = run(cfg);
    REQUIRE(records.size() == 1);
    for (const auto& [name, value] : records[0].cells) {
        if (const auto* bi = std::get_if<BigInt>(&value)) {
            CHECK(BigInt(value_to_text(value)) == *bi);
        } else if (const auto* rat = std::get_if<Rational>(&value)) {
            CHECK(parse_rational(value_to_text(value)) == *rat);
        } else if (const auto* u = std::get_if<u64>(&value)) {
            CHECK(std::stoull(value_to_text(value)) == *u);
        }
    }
}

TEST_CASE("sweep wall time at p=10007, 20 trials, transform path") {
    Config cfg = base_config(Command::sweep);
    cfg.primes = {10007};
    cfg.family = "random";
    cfg.size = SizeRule{false, 0, 0.625, 4.0};
    cfg.trials = 20;
    const auto start = std::chrono::steady_clock::now();
    RunStats stats;
    const auto records = run(cfg, &stats);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(records.size() == 20);
    CHECK(stats.trials_failed == 0);
    CHECK(seconds < 60.0);
    MESSAGE("sweep took ", seconds, "s");
}

TEST_CASE("rudnev and murphy rows through the harness") {
    Config cfg = base_config(Command::rudnev);
    cfg.dilate_rule = "first:1";
    const auto records = run(cfg);
    REQUIRE(records.size() == 1);
    CHECK(value_to_text(records[0].cells.at("lhs")) == "6"); // E_+(A)
    CHECK(value_to_text(records[0].cells.at("x_size")) == "1");

    Config mcfg = base_config(Command::murphy);
    mcfg.dilate_rule = "first:1";
    const auto mrecords = run(mcfg);
    REQUIRE(mrecords.size() == 1);
    CHECK(value_to_text(mrecords[0].cells.at("lhs")) == "4"); // E_x(A, A+1)

    Config rcfg = base_config(Command::rudnev);
    rcfg.primes = {101};
    rcfg.family = "random";
    rcfg.size = SizeRule{true, 12, 0.0, 1.0};
    rcfg.dilate_rule = "random:10";
    rcfg.trials = 2;
    const auto rr = run(rcfg);
    REQUIRE(rr.size() == 2);
    CHECK(value_to_text(rr[0].cells.at("x_size")) == "10");
}
