#include "emg/montecarlo.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstring>

using emg::Family;
using emg::GameParams;
using emg::Rational;
using emg::SimConfig;

namespace {
SimConfig base_config() {
    SimConfig config;
    config.params = {Rational(1, 4), Rational(1, 10), Rational(1, 100), Rational(2), Rational(1),
                     Rational(1, 2)};
    config.profile = emg::family_profile(Family::AsymT, 1);
    config.samples = 100000;
    config.seed = 42;
    return config;
}

bool same_cells(const emg::SimResult& a, const emg::SimResult& b) {
    return std::memcmp(a.cells, b.cells, sizeof(a.cells)) == 0 && a.aborted == b.aborted;
}
}  // namespace

TEST_CASE("exact Bernoulli thresholds") {
    CHECK(emg::make_bernoulli(Rational(0)).threshold == 0);
    CHECK_FALSE(emg::make_bernoulli(Rational(0)).always);
    CHECK(emg::make_bernoulli(Rational(1)).always);
    CHECK(emg::make_bernoulli(Rational(1, 2)).threshold == (std::uint64_t{1} << 63));
    CHECK(emg::make_bernoulli(Rational(3, 4)).threshold == (std::uint64_t{3} << 62));
    CHECK_THROWS_AS(emg::make_bernoulli(Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("identical seed and config reproduce identical results") {
    const auto config = base_config();
    const auto first = emg::simulate(config);
    const auto second = emg::simulate(config);
    CHECK(same_cells(first, second));
    CHECK(emg::sim_result_to_json(config, first).dump() ==
          emg::sim_result_to_json(config, second).dump());

    auto reseeded = config;
    reseeded.seed = 43;
    CHECK_FALSE(same_cells(first, emg::simulate(reseeded)));
}

TEST_CASE("results do not depend on the thread count") {
    auto config = base_config();
    config.samples = 20000;
    const auto serial = emg::simulate(config);
    for (int threads : {2, 3, 8}) {
        config.threads = threads;
        CHECK(same_cells(serial, emg::simulate(config)));
    }
}

TEST_CASE("constant-A profile converges to the exact loss") {
    auto config = base_config();
    config.profile = emg::family_profile(Family::AllA, 0);
    const auto result = emg::simulate(config);
    const auto report = emg::convergence_check(config, result);
    CHECK(report.pass);
    // Exact loss is p * 2M = 1/2.
    const auto welfare = emg::loss_exact_report(config.params, config.profile);
    CHECK(welfare.loss_exact == Rational(1, 2));
}

TEST_CASE("noiseless asymmetric profile matches its closed-form cell") {
    auto config = base_config();
    config.params.eps = Rational(1, 2);
    config.params.psi = Rational(0);
    const auto result = emg::simulate(config);
    const auto cells = emg::cell_probabilities(config.params, config.profile);
    // P(both B | b) = (1-eps)^2 (2-eps) / 2 = 3/16 at eps = 1/2, n = 1.
    CHECK(cells.at(emg::State::b, emg::Action::B, emg::Action::B) / config.params.p ==
          Rational(3, 16));
    const auto report = emg::convergence_check(config, result);
    CHECK(report.pass);
}

TEST_CASE("negative control: a wrong exact value fails loudly") {
    auto config = base_config();
    config.samples = 200000;
    const auto result = emg::simulate(config);
    const auto cells = emg::cell_probabilities(config.params, config.profile);
    const auto welfare = emg::loss_exact_report(config.params, config.profile);
    const auto good = emg::convergence_check(config, result, cells, welfare.loss_exact,
                                             welfare.loss_second_moment);
    CHECK(good.pass);
    const auto bad = emg::convergence_check(config, result, cells, welfare.loss_exact + 1,
                                            welfare.loss_second_moment + 2 * welfare.loss_exact + 1);
    CHECK_FALSE(bad.pass);
    CHECK(bad.items.back().z_abs() > 100.0);
}

TEST_CASE("small samples still produce a valid report") {
    auto config = base_config();
    config.samples = 100;
    const auto result = emg::simulate(config);
    CHECK(result.effective_samples() == 100);
    const auto report = emg::convergence_check(config, result);
    CHECK(report.items.size() >= 2);  // wide bands, but well-formed either way
}

TEST_CASE("round cap aborts pathological samples explicitly") {
    auto config = base_config();
    config.params.eps = Rational(1, 2);
    config.samples = 5000;
    config.round_cap = 1;  // any exchange beyond one successful message aborts
    const auto result = emg::simulate(config);
    CHECK(result.aborted > 0);
    std::uint64_t recorded = 0;
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) recorded += result.cells[s][i][j];
    CHECK(recorded + result.aborted == result.samples);
}

TEST_CASE("simulation rejects malformed configurations") {
    auto config = base_config();
    config.samples = 0;
    CHECK_THROWS_AS(emg::simulate(config), std::invalid_argument);
    config.samples = 10;
    config.threads = 0;
    CHECK_THROWS_AS(emg::simulate(config), std::invalid_argument);
    config.threads = 1;
    config.params.eps = 2;
    CHECK_THROWS_AS(emg::simulate(config), std::invalid_argument);
}

TEST_CASE("simulation JSON echoes the seed and full configuration") {
    auto config = base_config();
    config.samples = 1000;
    const auto result = emg::simulate(config);
    const auto j = emg::sim_result_to_json(config, result);
    CHECK(j.at("seed") == 42);
    CHECK(j.at("samples") == 1000);
    CHECK(j.at("params").at("epsilon") == "1/10");
    CHECK(j.at("profile").at("s1").at("family") == "asym");
    CHECK(j.contains("mean_loss"));
    CHECK(j.contains("frequencies"));
}
