#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "blowup/cli.hpp"
#include "blowup/config.hpp"
#include "blowup/parallel.hpp"
#include "blowup/potential_well.hpp"
#include "blowup/sweep.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, std::string> keyvals(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "blowup_lab_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig small_sweep() {
    SweepConfig c;
    c.p_grid = {3.0, 4.0};
    c.m_grid = {1.5, 2.0, 3.5};
    c.N = 33;
    c.horizon = 3.0;
    c.seeds = {1, 2};
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    std::istringstream in(
        "# comment\n"
        "p = 4.5\n"
        "family = \"sine\"  # trailing\n"
        "p_grid = [3, 4.5, 6]\n"
        "N = 129\n"
        "\n");
    const Config c = Config::parse(in);
    CHECK(*c.number("p") == 4.5);
    CHECK(*c.text("family") == "sine");
    CHECK(*c.list("p_grid") == std::vector<double>{3.0, 4.5, 6.0});
    CHECK(*c.integer("N") == 129);
    CHECK(*c.list("p") == std::vector<double>{4.5});
    CHECK_FALSE(c.number("m"));
    CHECK_THROWS_AS(c.number("family"), ConfigError);
    CHECK_THROWS_AS(c.require_known({"p", "N"}), ConfigError);

    std::istringstream bad("p 4\n");
    CHECK_THROWS_AS(Config::parse(bad), ConfigError);
    std::istringstream dup("p = 4\np = 5\n");
    CHECK_THROWS_AS(Config::parse(dup), ConfigError);
    std::istringstream frac("N = 12.5\n");
    CHECK_THROWS_AS(Config::parse(frac).integer("N"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/blowup.toml"), ConfigError);
}

TEST_CASE("region command") {
    const Run r = run({"region", "--n", "3", "--p", "4", "--m", "2.5"});
    CHECK(r.code == kExitOk);
    const auto kv = keyvals(r.out);
    CHECK(kv.at("m0") == "2.4");
    CHECK(kv.at("new_thm") == "true");
    CHECK(kv.at("old_thm") == "false");
    CHECK(kv.at("p_admissible") == "true");
    CHECK(run({"region", "--n", "1", "--p", "2", "--m", "2"}).code == kExitConfig);
}

TEST_CASE("well command") {
    const Run r = run({"well", "--p", "4", "--N", "257", "--L", "1"});
    CHECK(r.code == kExitOk);
    const auto kv = keyvals(r.out);
    const double d = std::stod(kv.at("d")), E1 = std::stod(kv.at("E1"));
    CHECK(std::abs(d - E1) / E1 <= 1e-6);
    CHECK(kv.at("d_equals_E1") == "true");
    CHECK(std::stod(kv.at("B1")) > 0.6687);
    CHECK(kv.count("lambda1"));
}

TEST_CASE("simulate command") {
    const fs::path csv = scratch("demo.csv");
    const Run r = run({"simulate", "--preset", "blowup-demo", "--out", csv.string()});
    CHECK(r.code == kExitOk);
    const auto kv = keyvals(r.out);
    CHECK(kv.at("outcome") == "blowup_detected");
    CHECK(std::stod(kv.at("t_blow_hi")) > 0.0);
    CHECK(std::stod(kv.at("t_blow_lo")) < std::stod(kv.at("t_blow_hi")));
    const std::string body = read_file(csv);
    CHECK(body.rfind("t,E,lp_u,grad_u,l2_v,D,H,Z,u_inf\n", 0) == 0);

    const fs::path nd = scratch("small.ndjson");
    const Run s = run({"simulate", "--p", "4", "--m", "2", "--N", "33", "--horizon", "0.5", "--out", nd.string()});
    CHECK(s.code == kExitOk);
    CHECK(keyvals(s.out).at("outcome") == "global_to_horizon");
    CHECK(read_file(nd).rfind("{\"t\":0.0", 0) == 0);
}

TEST_CASE("classify, trace and check-assumptions commands") {
    const auto c = keyvals(run({"classify", "--preset", "blowup-demo"}).out);
    CHECK(c.at("in_Wu") == "true");
    CHECK(c.at("in_W") == "true");

    const Run t = run({"trace", "--p", "4", "--m", "2", "--N", "65", "--workers", "2"});
    CHECK(t.code == kExitOk);
    const auto tk = keyvals(t.out);
    CHECK(tk.at("report").find("\"violations\":0") != std::string::npos);

    const Run a = run({"check-assumptions", "--beta", "1", "--mu", "2", "--m", "3"});
    CHECK(a.code == kExitOk);
    const auto ak = keyvals(a.out);
    CHECK(ak.at("q1_violations") == "0");
    CHECK(ak.at("q3_violations") == "0");
    CHECK(std::stod(ak.at("q3_witness_c4")) >= 1.0);
}

TEST_CASE("configuration errors exit with 2") {
    CHECK(run({"frobnicate"}).code == kExitConfig);
    CHECK(run({"region", "--bogus", "1"}).code == kExitConfig);
    CHECK(run({"well", "--config", "/nonexistent/blowup.toml"}).code == kExitConfig);
    CHECK(run({"well", "--p", "1.5"}).code == kExitConfig);
    CHECK(run({"simulate", "--preset", "nope"}).code == kExitConfig);
    const fs::path cfg = scratch("typo.toml");
    write_file(cfg, "pp = 4\n");
    CHECK(run({"well", "--config", cfg.string()}).code == kExitConfig);
    const fs::path sweep = scratch("unsorted.toml");
    write_file(sweep, "p_grid = [4, 3]\nm_grid = [2]\n");
    CHECK(run({"sweep", "--config", sweep.string()}).code == kExitConfig);
    write_file(sweep, "p_grid = []\nm_grid = [2]\n");
    CHECK(run({"sweep", "--config", sweep.string()}).code == kExitConfig);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("flags override the config file") {
    const fs::path cfg = scratch("layer.toml");
    write_file(cfg, "n = 3\np = 4\nm = 3\n");
    CHECK(keyvals(run({"region", "--config", cfg.string()}).out).at("new_thm") == "false");
    CHECK(keyvals(run({"region", "--config", cfg.string(), "--m", "2.5"}).out).at("new_thm") == "true");
}

TEST_CASE("sweep config validation") {
    SweepConfig c = small_sweep();
    CHECK_NOTHROW(validate(c));
    c.p_grid = {};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_sweep();
    c.p_grid = {2.0, 3.0};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_sweep();
    c.m_grid = {2.0, 2.0};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_sweep();
    c.m_grid = {1.0, 2.0};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_sweep();
    c.family = "zigzag";
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_sweep();
    c.params.a = -1.0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("sweep is deterministic and ordered") {
    SweepConfig c = small_sweep();
    c.workers = 1;
    std::ostringstream one;
    write_sweep_csv(one, run_sweep(c));
    c.workers = 4;
    const std::vector<SweepRow> rows = run_sweep(c);
    std::ostringstream four;
    write_sweep_csv(four, rows);
    CHECK(one.str() == four.str());

    REQUIRE(rows.size() == 12);
    std::size_t k = 0;
    for (double p : c.p_grid)
        for (double m : c.m_grid)
            for (std::uint64_t s : c.seeds) {
                CHECK(rows[k].p == p);
                CHECK(rows[k].m == m);
                CHECK(rows[k].seed == s);
                ++k;
            }
    for (const SweepRow& r : rows) {
        CHECK_FALSE(is_counterexample(r));
        CHECK(r.mu == r.m);
        CHECK(r.m0 == m0_threshold(1, r.p));
    }

    std::istringstream back(four.str());
    const std::vector<SweepRow> parsed = read_sweep_csv(back);
    std::ostringstream again;
    write_sweep_csv(again, parsed);
    CHECK(again.str() == four.str());
    CHECK(four.str().rfind(std::string(kSweepHeader) + "\n", 0) == 0);
}

TEST_CASE("sweep command is byte-identical across runs") {
    const fs::path cfg = scratch("sweep.toml");
    write_file(cfg, "p_grid = [3, 4]\nm_grid = [2, 3.5]\nN = 33\nhorizon = 3\nseeds = [1, 2]\n");
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    CHECK(run({"sweep", "--config", cfg.string(), "--workers", "3", "--out", a.string()}).code == kExitOk);
    CHECK(run({"sweep", "--config", cfg.string(), "--workers", "1", "--out", b.string()}).code == kExitOk);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("counterexamples and inconclusive sweeps") {
    SweepRow r{};
    r.in_Wu = true;
    r.new_thm = true;
    r.outcome = Outcome::global_to_horizon;
    CHECK(is_counterexample(r));
    r.outcome = Outcome::blowup_detected;
    CHECK_FALSE(is_counterexample(r));
    r.new_thm = false;
    r.outcome = Outcome::global_to_horizon;
    CHECK_FALSE(is_counterexample(r));

    std::vector<SweepRow> rows(3, r);
    rows[0].outcome = Outcome::inconclusive;
    CHECK_FALSE(inconclusive_dominated(rows));
    rows[1].outcome = Outcome::inconclusive;
    CHECK(inconclusive_dominated(rows));
}

TEST_CASE("worker default comes from the environment") {
    ::setenv("BLOWUP_LAB_WORKERS", "3", 1);
    CHECK(default_workers() == 3);
    ::setenv("BLOWUP_LAB_WORKERS", "junk", 1);
    CHECK(default_workers() >= 1);
    ::unsetenv("BLOWUP_LAB_WORKERS");
}

TEST_CASE("region chart") {
    ChartConfig c;
    c.n = 3;
    c.p_min = 2.0;
    c.p_max = 7.0;
    const std::string svg = emit_region_chart(c);
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("id=\"cutoff\"") != std::string::npos);
    CHECK(svg.find("id=\"curve-m0\"") != std::string::npos);
    CHECK(svg.find("id=\"curve-new\"") != std::string::npos);
    CHECK(svg.find("id=\"curve-diagonal\"") != std::string::npos);
    CHECK(svg.find("id=\"old-region\"") != std::string::npos);
    CHECK(svg.find("id=\"new-region\"") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);

    // Cutoff at p = 4 for n = 3: x = left + (4 - 2)/(7 - 2) * plot width.
    CHECK(svg.find("<line id=\"cutoff\" x1=\"262.00\"") != std::string::npos);

    c.n = 1;
    CHECK(emit_region_chart(c).find("id=\"cutoff\"") == std::string::npos);

    c.markers = run_sweep(small_sweep());
    const std::string marked = emit_region_chart(c);
    std::size_t count = 0;
    for (auto pos = marked.find("class=\"marker\""); pos != std::string::npos;
         pos = marked.find("class=\"marker\"", pos + 1))
        ++count;
    CHECK(count == c.markers.size());

    c.p_max = c.p_min;
    CHECK_THROWS_AS(emit_region_chart(c), std::invalid_argument);
    c.p_min = 1.5;
    c.p_max = 4.0;
    CHECK_THROWS_AS(emit_region_chart(c), std::invalid_argument);
}

TEST_CASE("chart curves are ordered on the plotted range") {
    for (int n = 1; n <= 4; ++n) {
        for (int i = 1; i <= 400; ++i) {
            const double p = 2.0 + 8.0 * i / 400.0;
            CHECK(m0_threshold(n, p) < 1.0 + p / 2.0);
            CHECK(1.0 + p / 2.0 < p);
        }
    }
    CHECK(m0_threshold(3, 4.0) == 2.4);
}

TEST_CASE("chart command") {
    const fs::path cfg = scratch("chart.toml");
    write_file(cfg, "p_min = 3\np_max = 3\n");
    CHECK(run({"chart", "--config", cfg.string()}).code == kExitConfig);
    write_file(cfg, "p_min = 2\np_max = 8\n");
    const fs::path svg = scratch("chart.svg");
    CHECK(run({"chart", "--config", cfg.string(), "--n", "3", "--out", svg.string()}).code == kExitOk);
    CHECK(read_file(svg).find("id=\"cutoff\"") != std::string::npos);
}
