#include <doctest.h>

#include <cmath>
#include <random>

#include "fpulab/spectral.hpp"
#include "helpers.hpp"

using namespace fpulab;
using namespace fpulab::testing;

namespace {

const ChainParams kPeriodic{.sites = 32, .boundary = Boundary::periodic};
const ChainParams kDirichlet{.sites = 15, .boundary = Boundary::dirichlet};

}  // namespace

TEST_CASE("frequencies match the dispersion relation") {
    // N=1, k=1: 2 sin(pi/4) = sqrt(2)
    const auto wd = frequencies(1, Boundary::dirichlet);
    CHECK(wd.size() == 1);
    CHECK(wd[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // periodic top mode k = -N-1 has omega = 2
    const auto wp = frequencies(7, Boundary::periodic);
    CHECK(wp.size() == 16);
    CHECK(wp.front() == doctest::Approx(2.0).epsilon(1e-15));

    // strictly increasing in |k|
    const auto ks = mode_indices(7, Boundary::periodic);
    for (std::size_t i = 0; i + 1 < wp.size(); ++i)
        if (std::abs(ks[i]) < std::abs(ks[i + 1]))
            CHECK(wp[i] < wp[i + 1]);

    // pointwise against the closed form
    for (int n : {1, 5, 31}) {
        const auto w = frequencies(n, Boundary::dirichlet);
        for (int k = 1; k <= n; ++k)
            CHECK(w[k - 1] ==
                  doctest::Approx(2.0 * std::sin(k * M_PI / (2.0 * (n + 1))))
                      .epsilon(1e-15));
    }

    CHECK_THROWS_AS(frequencies(0, Boundary::dirichlet), std::invalid_argument);
}

TEST_CASE("basis Gram matrix is the identity") {
    for (const ChainParams& c : {kPeriodic, kDirichlet}) {
        const int n = paper_mode_count(c);
        const auto ks = mode_indices(n, c.boundary);
        // columns of the basis via from_modes of unit coefficient vectors
        std::vector<std::vector<double>> cols;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            ModeCoeffs mc;
            mc.k = ks;
            mc.phat.assign(ks.size(), 0.0);
            mc.qhat.assign(ks.size(), 0.0);
            mc.qhat[i] = 1.0;
            cols.push_back(from_modes_direct(mc, c).q);
        }
        for (std::size_t a = 0; a < cols.size(); ++a)
            for (std::size_t b = a; b < cols.size(); ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < cols[a].size(); ++j)
                    dot += cols[a][j] * cols[b][j];
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
            }
    }
}

TEST_CASE("fast transform agrees with the direct-basis oracle") {
    std::mt19937_64 rng(31);
    for (const ChainParams& c : {kPeriodic, kDirichlet}) {
        for (int trial = 0; trial < 20; ++trial) {
            const LatticeState s = random_state(c.sites, rng);
            const ModeCoeffs fast = to_modes(s, c);
            const ModeCoeffs direct = to_modes_direct(s, c);
            CHECK(max_abs_diff(fast.phat, direct.phat) < 1e-12);
            CHECK(max_abs_diff(fast.qhat, direct.qhat) < 1e-12);
            const LatticeState back = from_modes(fast, c);
            const LatticeState back_direct = from_modes_direct(fast, c);
            CHECK(max_abs_diff(back.q, back_direct.q) < 1e-12);
        }
    }
}

TEST_CASE("unit mode and round-trip") {
    for (const ChainParams& c : {kPeriodic, kDirichlet}) {
        const int n = paper_mode_count(c);
        const auto ks = mode_indices(n, c.boundary);
        // q = e_1 recovers a unit coefficient on k=1
        ModeCoeffs mc;
        mc.k = ks;
        mc.phat.assign(ks.size(), 0.0);
        mc.qhat.assign(ks.size(), 0.0);
        std::size_t i1 = 0;
        while (ks[i1] != 1) ++i1;
        mc.qhat[i1] = 1.0;
        const LatticeState s = from_modes(mc, c);
        const ModeCoeffs rec = to_modes(s, c);
        for (std::size_t i = 0; i < ks.size(); ++i)
            CHECK(std::abs(rec.qhat[i] - (i == i1 ? 1.0 : 0.0)) < 1e-12);

        // round-trip
        std::mt19937_64 rng(55);
        const LatticeState r = random_state(c.sites, rng);
        const LatticeState rt = from_modes(to_modes(r, c), c);
        CHECK(max_abs_diff(rt.q, r.q) < 1e-12);
        CHECK(max_abs_diff(rt.p, r.p) < 1e-12);
    }
}

TEST_CASE("Parseval: sum p_j^2 = sum phat_k^2") {
    std::mt19937_64 rng(77);
    for (const ChainParams& c : {kPeriodic, kDirichlet}) {
        for (int trial = 0; trial < 50; ++trial) {
            const LatticeState s = random_state(c.sites, rng);
            const ModeCoeffs mc = to_modes(s, c);
            double real = 0.0, spec = 0.0;
            for (double v : s.p) real += v * v;
            for (double v : mc.phat) spec += v * v;
            CHECK(spec == doctest::Approx(real).epsilon(1e-12));
        }
    }
}

TEST_CASE("mode energies") {
    SUBCASE("zero state") {
        for (double e : mode_energies(LatticeState::zero(32), kPeriodic).energy)
            CHECK(e == 0.0);
    }

    SUBCASE("single-mode excitation") {
        const int n = paper_mode_count(kDirichlet);
        const auto w = frequencies(n, Boundary::dirichlet);
        ModeCoeffs mc;
        mc.k = mode_indices(n, Boundary::dirichlet);
        mc.phat.assign(n, 0.0);
        mc.qhat.assign(n, 0.0);
        const double cc = 0.7;
        mc.qhat[0] = cc;  // k=1
        const LatticeState s = from_modes(mc, kDirichlet);
        const ModeSpectrum spec = mode_energies(s, kDirichlet);
        CHECK(spec.energy[0] ==
              doctest::Approx(w[0] * w[0] * cc * cc / 2.0).epsilon(1e-12));
        for (int i = 1; i < n; ++i) CHECK(std::abs(spec.energy[i]) < 1e-14);
    }

    SUBCASE("sum E_k equals H0 on random states") {
        std::mt19937_64 rng(123);
        for (const ChainParams& c : {kPeriodic, kDirichlet}) {
            for (int trial = 0; trial < 100; ++trial) {
                const LatticeState s = random_state(c.sites, rng);
                const ModeSpectrum spec = mode_energies(s, c);
                double total = 0.0;
                for (double e : spec.energy) total += e;
                CHECK(total ==
                      doctest::Approx(harmonic_energy(s, c)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("time_average") {
    SUBCASE("constant trace") {
        EnergyTrace tr;
        tr.k = {1, 2};
        for (int i = 0; i <= 10; ++i) {
            tr.times.push_back(0.1 * i);
            tr.energies.push_back({2.0, 5.0});
        }
        const auto avg = time_average(tr, 1.0);
        CHECK(avg[0] == doctest::Approx(2.0));
        CHECK(avg[1] == doctest::Approx(5.0));
    }

    SUBCASE("sin^2 averages to 1/2 over a period") {
        EnergyTrace tr;
        tr.k = {1};
        const int n = 20000;
        for (int i = 0; i <= n; ++i) {
            const double t = 2.0 * M_PI * i / n;
            tr.times.push_back(t);
            tr.energies.push_back({std::sin(t) * std::sin(t)});
        }
        CHECK(time_average(tr, 2.0 * M_PI)[0] ==
              doctest::Approx(0.5).epsilon(1e-6));
    }

    SUBCASE("refinement invariance for smooth traces") {
        auto make = [](int n) {
            EnergyTrace tr;
            tr.k = {1};
            for (int i = 0; i <= n; ++i) {
                const double t = 3.0 * i / n;
                tr.times.push_back(t);
                tr.energies.push_back({std::exp(-t) + std::cos(t)});
            }
            return tr;
        };
        const double coarse = time_average(make(4000), 3.0)[0];
        const double fine = time_average(make(8000), 3.0)[0];
        CHECK(std::abs(coarse - fine) < 1e-6);
    }

    SUBCASE("T out of range") {
        EnergyTrace tr;
        tr.k = {1};
        tr.times = {0.0, 1.0};
        tr.energies = {{1.0}, {1.0}};
        CHECK_THROWS_AS(time_average(tr, 2.0), std::invalid_argument);
    }
}

TEST_CASE("packet_fit") {
    SUBCASE("exact exponential") {
        std::vector<double> e;
        for (int k = 1; k <= 10; ++k) e.push_back(std::exp(-2.0 * k));
        const PacketFit f = packet_fit(e);
        CHECK(f.sigma == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.modes_used == 10);
    }

    SUBCASE("flat input") {
        std::vector<double> e(8, 0.25);
        CHECK(std::abs(packet_fit(e).sigma) < 1e-12);
    }

    SUBCASE("noisy exponential recovered within 15%") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> noise(-0.1, 0.1);
        std::vector<double> e;
        for (int k = 1; k <= 24; ++k)
            e.push_back(std::exp(-1.3 * k) * (1.0 + noise(rng)));
        const PacketFit f = packet_fit(e);
        CHECK(f.sigma == doctest::Approx(1.3).epsilon(0.15));
    }

    SUBCASE("too few points") {
        std::vector<double> e = {1.0, 0.5, 0.25};
        CHECK_THROWS_AS(packet_fit(e), std::invalid_argument);
        std::vector<double> gap = {1.0, 0.5, 0.0, 0.25, 0.1};
        CHECK_THROWS_AS(packet_fit(gap), std::invalid_argument);
    }
}

TEST_CASE("spectral_entropy") {
    SUBCASE("single mode") {
        std::vector<double> e(16, 0.0);
        e[3] = 2.0;
        CHECK(spectral_entropy(e).n_eff == doctest::Approx(1.0 / 16));
    }
    SUBCASE("equipartition") {
        std::vector<double> e(16, 0.125);
        CHECK(spectral_entropy(e).n_eff == doctest::Approx(1.0));
    }
    SUBCASE("two equal modes among N") {
        std::vector<double> e(10, 0.0);
        e[0] = e[5] = 1.0;
        // S = log 2
        CHECK(spectral_entropy(e).entropy ==
              doctest::Approx(std::log(2.0)).epsilon(1e-14));
        CHECK(spectral_entropy(e).n_eff == doctest::Approx(0.2));
    }
    SUBCASE("all-zero spectrum") {
        std::vector<double> e(4, 0.0);
        CHECK_THROWS_AS(spectral_entropy(e), std::invalid_argument);
    }
}
