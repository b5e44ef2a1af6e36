#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gaw/integrator.hpp"
#include "gaw/io.hpp"
#include "gaw/presets.hpp"

using namespace gaw;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<double> cells_of(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_CASE("g17 round-trips doubles exactly") {
  for (double x : {pi, 1.0 / 3.0, 0.1, 1e-17, 12345.678e-9, -2.5e300, 0.0, 42.0})
    CHECK(std::stod(g17(x)) == x);
}

TEST_CASE("config parsing") {
  SECTION("happy path with comments and spacing") {
    const std::string text =
        "# three points, ideal mirror\n"
        "n_points = 3\n"
        "omega0_tau0_pi=2.5   # inline comment\n"
        "  gamma_tau0_pi =  0.05\n"
        "\n"
        "reflectivity = 0.9\n";
    const auto cfg = parse_system_config(text);
    CHECK(cfg.n_points == 3);
    CHECK(cfg.omega0_tau0 == 2.5 * pi);
    CHECK(cfg.gamma_tau0 == 0.05 * pi);
    CHECK(cfg.reflectivity == 0.9);
    CHECK(cfg.gamma_ext_ratio == 0.0);
    CHECK(cfg.dephasing_ratio == 0.0);
  }

  SECTION("render and reparse") {
    const auto cfg = make_config(5, 8.41673312 * pi, 0.1443 * pi, 0.98, 0.1, 0.2);
    const auto again = parse_system_config(system_config_text(cfg));
    CHECK(again.n_points == cfg.n_points);
    CHECK(again.omega0_tau0 == Catch::Approx(cfg.omega0_tau0).epsilon(1e-15));
    CHECK(again.gamma_tau0 == Catch::Approx(cfg.gamma_tau0).epsilon(1e-15));
    CHECK(again.reflectivity == cfg.reflectivity);
    CHECK(again.gamma_ext_ratio == cfg.gamma_ext_ratio);
    CHECK(again.dephasing_ratio == cfg.dephasing_ratio);
  }

  SECTION("rejects malformed input") {
    CHECK_THROWS_AS(parse_system_config("n_points 3\n"), config_parse_error);
    CHECK_THROWS_AS(parse_system_config("n_points = 3\nomega0_tau0_pi = 2\n"),
                    config_parse_error);  // missing gamma
    CHECK_THROWS_AS(
        parse_system_config(
            "n_points = 3\nomega0_tau0_pi = 2\ngamma_tau0_pi = 0.05\nvolume = 1\n"),
        config_parse_error);
    CHECK_THROWS_AS(
        parse_system_config("n_points = 3\nn_points = 4\nomega0_tau0_pi = "
                            "2\ngamma_tau0_pi = 0.05\n"),
        config_parse_error);
    CHECK_THROWS_AS(
        parse_system_config(
            "n_points = 3\nomega0_tau0_pi = abc\ngamma_tau0_pi = 0.05\n"),
        config_parse_error);
    CHECK_THROWS_AS(
        parse_system_config(
            "n_points = 3\nomega0_tau0_pi = 2x\ngamma_tau0_pi = 0.05\n"),
        config_parse_error);
    CHECK_THROWS_AS(parse_system_config("n_points =\n"), config_parse_error);
    // parses fine, fails validation
    CHECK_THROWS_AS(
        parse_system_config("n_points = 0\nomega0_tau0_pi = 2\ngamma_tau0_pi = 0.05\n"),
        config_error);
    CHECK_THROWS_AS(
        parse_system_config(
            "n_points = 3\nomega0_tau0_pi = 2\ngamma_tau0_pi = 0.05\nreflectivity = 1.5\n"),
        config_error);
  }

  SECTION("several-emitter schema") {
    const std::string text =
        "omega0_tau0_pi = 2\n"
        "gamma_tau0_pi = 0.1\n"
        "coupling_mode = as_printed\n"
        "duplicate_detuning = 1\n"
        "atom1_n_points = 3\n"
        "atom1_eps0_re = 1\n"
        "atom2_n_points = 2\n"
        "atom2_detuning_ratio = 1.5\n"
        "atom2_eps0_im = 0\n";
    const auto cfg = parse_multi_config(text);
    REQUIRE(cfg.atoms.size() == 2);
    CHECK(cfg.coupling_mode == CouplingMode::AsPrinted);
    CHECK(cfg.duplicate_detuning);
    CHECK(cfg.atoms[0].n_points == 3);
    CHECK(cfg.atoms[1].detuning_ratio == 1.5);
    CHECK(cfg.atoms[0].eps0 == cplx{1.0, 0.0});
    CHECK(cfg.total_points() == 5);

    CHECK_THROWS_AS(parse_multi_config("omega0_tau0_pi = 2\ngamma_tau0_pi = 0.1\n"),
                    config_parse_error);  // no emitters
    CHECK_THROWS_AS(
        parse_multi_config("omega0_tau0_pi = 2\ngamma_tau0_pi = 0.1\n"
                           "coupling_mode = sideways\natom1_n_points = 1\n"
                           "atom1_eps0_re = 1\n"),
        config_parse_error);
    // amplitudes must normalize
    CHECK_THROWS_AS(
        parse_multi_config("omega0_tau0_pi = 2\ngamma_tau0_pi = 0.1\n"
                           "atom1_n_points = 1\natom1_eps0_re = 0.5\n"),
        config_error);
  }
}

TEST_CASE("csv writers") {
  const auto cfg = make_config(1, 2.0 * pi, 0.2);
  const auto tr = integrate(cfg, 2.0, 50, Frame::Lab);

  SECTION("trajectory header and shape") {
    std::ostringstream out;
    write_trajectory_csv(out, tr);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 1 + tr.size());
    CHECK(lines[0] == "t_over_tau0, re_eps, im_eps, abs2");
    const auto first = cells_of(lines[1]);
    REQUIRE(first.size() == 4);
    CHECK(first[0] == 0.0);
    CHECK(first[3] == 1.0);
    const auto last = cells_of(lines.back());
    CHECK(last[0] == Catch::Approx(2.0));
    CHECK(last[3] == Catch::Approx(tr.abs2(tr.size() - 1)));
  }

  SECTION("stride subsamples") {
    std::ostringstream out;
    write_trajectory_csv(out, tr, 10);
    CHECK(lines_of(out.str()).size() == 1 + (tr.size() + 9) / 10);
  }

  SECTION("deterministic output") {
    std::ostringstream a, b;
    write_trajectory_csv(a, tr);
    write_trajectory_csv(b, integrate(cfg, 2.0, 50, Frame::Lab));
    CHECK(a.str() == b.str());
  }

  SECTION("ensemble header") {
    auto noisy = make_config(1, 2.0 * pi, 0.2, 1.0, 0.0, 0.3);
    const auto st = ensemble_average(noisy, build_kernel(noisy), 2.0, 50, 3, 7u);
    std::ostringstream out;
    write_ensemble_csv(out, st);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 1 + st.mean_abs2.size());
    CHECK(lines[0] == "t_over_tau0, mean_abs2, stderr_abs2");
    CHECK(cells_of(lines[1]).size() == 3);
  }

  SECTION("field matrix shape") {
    const auto fm = intensity_map(tr, {0.0, 0.5, 1.0, 1.5, 2.0}, {0.5, 1.0, 2.0}, cfg);
    std::ostringstream out;
    write_field_csv(out, fm);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    for (const auto& line : lines) CHECK(cells_of(line).size() == 5);
    CHECK(cells_of(lines[0])[0] == fm.at(0, 0));
  }

  SECTION("series writer") {
    std::ostringstream out;
    write_series_csv(out, "norm", {0.0, 1.0}, {1.0, 0.5});
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t_over_tau0, norm");
  }
}

TEST_CASE("json exports") {
  SECTION("mode set") {
    const auto set = classify(find_preset("fig6a").config());
    const auto j = mode_set_json(set);
    CHECK(j["case_label"] == "TwoMode");
    REQUIRE(j["modes"].size() == 2);
    CHECK(j["modes"][0]["source"] == "CondN");
    CHECK(j["modes"][0]["omega_tau0_pi"].get<double>() ==
          Catch::Approx(23.0 / 3.0).epsilon(1e-12));
    CHECK(j["modes"][0].contains("weight"));
    CHECK(j["modes"][0]["weight"].contains("re"));
    CHECK(j["modes"][0]["weight"].contains("im"));
    CHECK(j["modes"][0].contains("k"));
    CHECK(j["modes"][0].contains("residual"));
  }

  SECTION("decaying case") {
    const auto j = mode_set_json(classify(make_config(3, 2.3 * pi, 0.05 * pi)));
    CHECK(j["case_label"] == "Decaying");
    CHECK(j["modes"].empty());
  }

  SECTION("pole list") {
    const auto cfg = find_preset("fig2a").config();
    const auto poles = find_poles(cfg);
    const auto j = poles_json(poles, cfg);
    REQUIRE(j.is_array());
    REQUIRE(!j.empty());
    CHECK(j[0].contains("re_s_tau0"));
    CHECK(j[0].contains("im_s_tau0"));
    CHECK(j[0].contains("omega_tau0_pi"));
    CHECK(j[0].contains("weight"));
  }

  SECTION("field metadata") {
    const auto cfg = make_config(1, 2.0 * pi, 0.2);
    const auto tr = integrate(cfg, 2.0, 50, Frame::Lab);
    const auto fm = intensity_map(tr, {0.0, 1.0}, {0.5, 1.5}, cfg);
    const auto j = field_meta_json(fm);
    CHECK(j["x_grid"].size() == 2);
    CHECK(j["t_grid"].size() == 2);
    CHECK(j["norm_series"].size() == 2);
  }
}

TEST_CASE("hashing and the manifest") {
  const auto a = make_config(3, 2.0 * pi, 0.05 * pi);
  const auto b = make_config(3, 2.0 * pi, 0.05 * pi, 0.9);
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));

  MultiAtomConfig mc;
  mc.atoms = {AtomSpec{2, 0.0, cplx{1.0, 0.0}}};
  CHECK(config_hash(mc).size() == 16);

  const auto j = manifest_json("fig2a", config_hash(a), 12345u, 1.25);
  CHECK(j["preset"] == "fig2a");
  CHECK(j["config_hash"] == config_hash(a));
  CHECK(j["tool_version"] == version);
  CHECK(j["seed"] == 12345u);
  CHECK(j["runtime_seconds"] == 1.25);
  CHECK(j.contains("created_utc"));
}

TEST_CASE("text file round trip") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "gaw_io_roundtrip.txt").string();
  const std::string payload = "line one\nline two\n";
  write_text_file(path, payload);
  CHECK(read_text_file(path) == payload);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), io_error);
  CHECK_THROWS_AS(write_text_file("/nonexistent_dir_zz/x.txt", "y"), io_error);
}
