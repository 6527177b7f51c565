#include "helpers.hpp"
#include "qos/cli.hpp"

using namespace qos;
using Catch::Approx;

namespace {

std::string field_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const ConfigError &e) {
        return e.field();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("default run config", "[config]") {
    const auto rc = default_run_config();
    CHECK(rc.scheme == Scheme::S1);
    CHECK(rc.a.real() == Approx(1 / std::sqrt(2.0)).margin(1e-16));
    CHECK(std::get<EulerAngles>(rc.omega) == kHadamardAngles);
    CHECK(rc.alpha == Amplitude(0.6));
    CHECK(rc.beta == Amplitude(0.8));
    CHECK(rc.recoverer == Party::Holly);
    CHECK(rc.trials == 100000);
    CHECK(rc.seed == 42);
}

TEST_CASE("config documents overlay the defaults", "[config]") {
    const auto rc = parse_run_config_text(R"({
        "scheme": "s2",
        "a": [0.6, 0.0], "b": [0.0, 0.8],
        "omega": {"matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
        "recoverer": "jack", "seed": 9
    })");
    CHECK(rc.scheme == Scheme::S2);
    CHECK(rc.b == Amplitude(0.0, 0.8));
    CHECK(std::get<Gate1>(rc.omega) == pauli(Pauli::X));
    CHECK(rc.recoverer == Party::Jack);
    CHECK(rc.seed == 9);
    CHECK(rc.trials == 100000);

    // round trip through the embedded form
    const auto again = parse_run_config(to_json(rc));
    CHECK(to_json(again) == to_json(rc));
}

TEST_CASE("config errors name the field", "[config]") {
    CHECK(field_of([] { parse_run_config_text(R"({"trails": 5})"); }) == "trails");
    CHECK(field_of([] { parse_run_config_text(R"({"a": [1]})"); }) == "a");
    CHECK(field_of([] { parse_run_config_text(R"({"scheme": "s3"})"); }) == "scheme");
    CHECK(field_of([] { parse_run_config_text(R"({"trials": -4})"); }) == "trials");
    CHECK(field_of([] { parse_run_config_text(R"({"seed": 1.5})"); }) == "seed");
    CHECK(field_of([] { parse_run_config_text(R"({"recoverer": "grey"})"); }) == "recoverer");
    CHECK(field_of([] { parse_run_config_text(R"({"omega": {"angles": [1, 2]}})"); }) ==
          "omega.angles");
    CHECK(field_of([] { parse_run_config_text(R"({"omega": {"euler": [1, 2, 3]}})"); }) ==
          "omega.euler");
    CHECK(field_of([] {
              parse_run_config_text(R"({"omega": {"matrix": [[[1,0],[1,0]],[[0,0],[1,0]]]}})");
          }) == "omega.matrix");
    CHECK(field_of([] { parse_run_config_text(R"({"scheme": "s1",)"); }) == "config");
    CHECK(field_of([] { parse_run_config_text("[1, 2]"); }) == "config");
    CHECK(field_of([] { load_run_config("/nonexistent/qos.json"); }) == "config");

    auto rc = default_run_config();
    rc.beta = 0.9;
    CHECK(field_of([&] { check_run_config(rc); }) == "alpha/beta");
    rc = default_run_config();
    rc.a = rc.b = 0.0;
    CHECK(field_of([&] { check_run_config(rc); }) == "a/b");
    rc = default_run_config();
    rc.trials = 0;
    CHECK(field_of([&] { check_run_config(rc); }) == "trials");
}

TEST_CASE("flag value parsing", "[config]") {
    CHECK(parse_real_token("f", "pi") == std::numbers::pi);
    CHECK(parse_real_token("f", "-pi/2") == -std::numbers::pi / 2);
    CHECK(parse_real_token("f", "2pi/3") == Approx(2 * std::numbers::pi / 3).margin(1e-15));
    CHECK(parse_real_token("f", "0.25*pi") == Approx(std::numbers::pi / 4).margin(1e-15));
    CHECK(parse_real_token("f", " 0.5 ") == 0.5);
    CHECK(field_of([] { parse_real_token("--a", "abc"); }) == "--a");
    CHECK(field_of([] { parse_real_token("--a", "pi/0"); }) == "--a");

    CHECK(parse_complex_text("--a", "0.6") == Amplitude(0.6));
    CHECK(parse_complex_text("--a", "0,0.8") == Amplitude(0.0, 0.8));
    CHECK(field_of([] { parse_complex_text("--b", "1,2,3"); }) == "--b");

    const auto ang = parse_angles_text("--omega-angles", "pi/2,0,pi");
    CHECK(ang == kHadamardAngles);
    CHECK(field_of([] { parse_angles_text("--omega-angles", "1,2"); }) == "--omega-angles");
    CHECK(parse_scheme_text("--scheme", "s2") == Scheme::S2);
    CHECK(parse_recoverer_text("--recoverer", "jack") == Party::Jack);
}

TEST_CASE("scheme config built from a run config", "[config]") {
    auto rc = parse_run_config_text(R"({"alpha": [0.0, 1.0], "beta": [0.0, 0.0]})");
    const auto s1 = to_scheme_config(rc);
    CHECK_FALSE(s1.wspec);
    const auto s2 = to_scheme_config(rc, Scheme::S2);
    REQUIRE(s2.wspec);
    CHECK(s2.wspec->alpha() == Amplitude(0.0, 1.0));
}

TEST_CASE("commands are byte-identical without timestamps", "[cli]") {
    auto rc = default_run_config();
    rc.trials = 3000;
    const cli::OutputOptions text{false, false};
    const cli::OutputOptions json{true, false};
    for (auto cmd : {&cli::cmd_run, &cli::cmd_enumerate, &cli::cmd_compare}) {
        const auto a = cmd(rc, text);
        const auto b = cmd(rc, text);
        CHECK(a.exit_code == cli::kExitOk);
        CHECK(a.report == b.report);
        CHECK(a.report.find("generated") == std::string::npos);
        CHECK(a.report.find("[config]") != std::string::npos);
        CHECK(cmd(rc, json).report == cmd(rc, json).report);
    }
    const auto stamped = cli::cmd_enumerate(rc, cli::OutputOptions{false, true});
    CHECK(stamped.report.find("generated = ") != std::string::npos);
}

TEST_CASE("run report", "[cli]") {
    auto rc = default_run_config();
    rc.scheme = Scheme::S2;
    rc.trials = 1000;
    rc.seed = 7;
    const auto out = cli::cmd_run(rc, cli::OutputOptions{true, false});
    REQUIRE(out.exit_code == cli::kExitOk);
    const auto j = Json::parse(out.report);
    CHECK(j["command"] == "run");
    CHECK(j["config"]["scheme"] == "s2");
    CHECK(j["result"]["successes"] == 1000);
    CHECK(j["result"]["success_rate"] == 1.0);
    CHECK(j["exact_p_success_rational"] == "1");
    CHECK(j["within_3_sigma"] == true);
    CHECK_FALSE(j.contains("generated"));
}

TEST_CASE("enumerate report", "[cli]") {
    auto rc = default_run_config();
    rc.a = 1.0;
    rc.b = 0.0;
    rc.omega = EulerAngles{};
    const auto out = cli::cmd_enumerate(rc, cli::OutputOptions{true, false});
    const auto j = Json::parse(out.report);
    CHECK(j["report"]["p_success_exact"] == "2/3");
    // a'=1: stage-2 psi outcomes carry 1/3, phi outcomes 1/6
    const auto &first = j["report"]["branches"][0]["path"];
    CHECK(first[1]["outcome"] == "PsiPlus");
    CHECK(first[1]["probability"] == Approx(1.0 / 3).margin(1e-12));
    const auto text = cli::cmd_enumerate(rc, cli::OutputOptions{false, false}).report;
    CHECK(text.find("p_success_exact = 2/3") != std::string::npos);
    CHECK(text.find("Grey:bell(g1,g)=PhiPlus") != std::string::npos);
}

TEST_CASE("compare report carries exact rationals", "[cli]") {
    const auto out = cli::cmd_compare(default_run_config(), cli::OutputOptions{true, false});
    const auto j = Json::parse(out.report);
    const auto &rows = j["report"]["rows"];
    CHECK(rows[0]["efficiency"]["eta_exact"] == "1/15");
    CHECK(rows[1]["efficiency"]["eta_exact"] == "1/9");
    CHECK(rows[0]["efficiency"]["p_exact"] == "2/3");
    CHECK(rows[0]["cbits"] == 5);
    CHECK(rows[1]["cbits"] == 4);
    CHECK(j["report"]["teleport_corrections"]["diverges"] == true);

    const auto text = cli::cmd_compare(default_run_config(), cli::OutputOptions{false, false}).report;
    CHECK(text.find("1/15") != std::string::npos);
    CHECK(text.find("1/9") != std::string::npos);
    // the teleport divergence is flagged once
    std::size_t flags = 0;
    for (auto pos = text.find("flag = "); pos != std::string::npos; pos = text.find("flag = ", pos + 1))
        ++flags;
    CHECK(flags == 1);

    auto jack = default_run_config();
    jack.recoverer = Party::Jack;
    const auto jj = Json::parse(cli::cmd_compare(jack, cli::OutputOptions{true, false}).report);
    CHECK(jj["report"]["rows"][0]["efficiency"] == rows[0]["efficiency"]);
    CHECK(jj["report"]["rows"][1]["efficiency"] == rows[1]["efficiency"]);
}

TEST_CASE("command exit codes", "[cli]") {
    auto rc = default_run_config();
    rc.alpha = 0.7;
    const auto bad = cli::cmd_run(rc, {});
    CHECK(bad.exit_code == cli::kExitConfig);
    CHECK(bad.diagnostic.find("alpha/beta") != std::string::npos);
    CHECK(bad.report.empty());

    rc = default_run_config();
    rc.trials = 0;
    CHECK(cli::cmd_run(rc, {}).exit_code == cli::kExitConfig);

    const auto breach = cli::detail::guarded([]() -> std::string {
        fail(ErrorKind::InvariantBreach, "forced");
    });
    CHECK(breach.exit_code == cli::kExitInvariant);
    CHECK(breach.diagnostic.find("forced") != std::string::npos);
}
