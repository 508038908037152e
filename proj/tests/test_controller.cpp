#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "heli/controller.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace heli;

TEST_CASE("stock gains and validation", "[controller]") {
    const ControllerGains g;
    CHECK(g.k1 == 1.0);
    CHECK(g.k2 == 2.0);
    CHECK(g.m1 == 0.5);
    CHECK(g.m2 == 0.5);
    CHECK(g.n1 == 1.0);
    CHECK(g.n2 == 1.0);
    CHECK(g.h == OddFraction(3, 5));
    CHECK_NOTHROW(g.validate());

    ControllerGains bad;
    bad.k1 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ControllerGains{};
    bad.k2 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ControllerGains{};
    bad.m1 = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ControllerGains{};
    bad.n2 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    ControllerGains degenerate;
    degenerate.m1 = degenerate.m2 = degenerate.n1 = degenerate.n2 = 0.0;
    CHECK_NOTHROW(degenerate.validate());
}

TEST_CASE("eta2 degeneracy of the fractional-decay coefficient", "[controller]") {
    // Stock gains: m - n/(1+h) = 0.5 - 1/1.6 < 0 — the finite-time radius
    // formula does not apply to them.
    CHECK(ControllerGains{}.eta2_degenerate());

    ControllerGains ok;
    ok.m1 = ok.m2 = 1.0;
    ok.n1 = ok.n2 = 0.5;
    CHECK_FALSE(ok.eta2_degenerate());

    ControllerGains zero;
    zero.m1 = zero.m2 = zero.n1 = zero.n2 = 0.0;
    CHECK(zero.eta2_degenerate());
}

TEST_CASE("tracking and compensated errors", "[controller]") {
    const PlantState s{0.3, 1.2, -0.1, 0.4};
    const RefPoint ref{0.25, 0.0};
    const TrackingErrors e = tracking_errors(s, 0.9, ref, Channel::elevation);
    CHECK(e.e1 == 0.3 - 0.25);
    CHECK(e.e2 == 1.2 - 0.9);

    const TrackingErrors ep = tracking_errors(s, 0.1, {0.05, 0.0}, Channel::pitch);
    CHECK(ep.e1 == -0.1 - 0.05);
    CHECK(ep.e2 == 0.4 - 0.1);

    const CompensatorState c{0.02, -0.01};
    const CompensatedErrors z = compensated_errors(e, c);
    CHECK(z.z1 == e.e1 - 0.02);
    CHECK(z.z2 == e.e2 - -0.01);
}

TEST_CASE("compensator derivative reference values", "[controller]") {
    const ControllerGains g;  // k1=1, k2=2, n1=n2=1, h=3/5
    const CompensatorState d = compensation_derivatives({1.0, 0.0}, 0.0, g);
    CHECK(d.xi1 == -2.0);
    CHECK(d.xi2 == -1.0);

    const CompensatorState d2 = compensation_derivatives({0.2, -0.1}, 0.05, g);
    CHECK_THAT(d2.xi1, WithinRel(-0.6307307877431757, 1e-13));
    CHECK_THAT(d2.xi2, WithinRel(0.251188643150958, 1e-13));

    // At the origin with no filter error the compensator rests.
    const CompensatorState r = compensation_derivatives({0.0, 0.0}, 0.0, g);
    CHECK(r.xi1 == 0.0);
    CHECK(r.xi2 == 0.0);
}

TEST_CASE("intermediate command reference value", "[controller]") {
    const ControllerGains g;  // k1=1, m1=0.5
    CHECK_THAT(intermediate_control(0.1, 0.2, 0.1, g),
               WithinRel(-0.025594321575479004, 1e-13));
    CHECK(baseline_intermediate_control(0.1, 0.2, g) == -0.1 + 0.2);
}

TEST_CASE("elevation law cancels gravity at rest", "[controller]") {
    const ControllerGains g;
    const PlantParams p;
    const double x1 = 0.3;
    const double u = control_law_elevation(0.0, 0.0, 0.0, 0.0, x1, 0.0, g, p);
    CHECK_THAT(u, WithinRel(p.gravity * p.mass * std::cos(x1), 1e-12));

    // Vertical arm: the gravity feedforward disappears.
    const double uv = control_law_elevation(0.0, 0.0, 0.0, 0.0, std::numbers::pi / 2.0,
                                            0.0, g, p);
    CHECK_THAT(uv, WithinAbs(0.0, 1e-13));
}

TEST_CASE("elevation law reference value", "[controller]") {
    const ControllerGains g;
    const PlantParams p;
    const double u = control_law_elevation(0.1, -0.2, 0.15, 0.3, 0.2, 0.05, g, p);
    CHECK_THAT(u, WithinRel(11.673235852201692, 1e-13));
}

TEST_CASE("pitch law is gravity-free and linear", "[controller]") {
    const ControllerGains g;
    const PlantParams p;
    CHECK(control_law_pitch(0.0, 0.0, 0.0, 0.0, 0.0, g, p) == 0.0);
    const double slope =
        control_law_pitch(0.0, 0.7, 0.0, 0.0, 0.0, g, p) -
        control_law_pitch(0.0, 0.0, 0.0, 0.0, 0.0, g, p);
    CHECK_THAT(slope, WithinRel(-(p.pitch_inertia / p.pitch_arm) * g.k2 * 0.7, 1e-12));

    CHECK(baseline_control_law_pitch(0.0, 0.0, 0.0, 0.0, g, p) == 0.0);
}

TEST_CASE("substituting the laws reconstructs the unlearned disturbance",
          "[controller][property]") {
    // Closed-loop identity: with u from the control law, the residual
    // E = dz2 + k2 z2 + z1 + m2 z2^h - n2 xi2^h collapses to d - nn_out for
    // every state. This ties the plant, compensator, law, and residual
    // definitions together.
    const ControllerGains g;
    const PlantParams p;
    std::mt19937 rng(20240);
    std::uniform_real_distribution<double> us(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x1 = us(rng), x2 = 2.0 * us(rng);
        const double ref_pos = 0.3 * us(rng);
        const double xi1 = 0.5 * us(rng), xi2 = 0.5 * us(rng);
        const double x1c = 2.0 * us(rng), x2c = 2.0 * us(rng);
        const double nn = us(rng);
        const double d = 2.0 * us(rng);

        const double e1 = x1 - ref_pos;
        const double e2 = x2 - x1c;
        const double z1 = e1 - xi1;
        const double z2 = e2 - xi2;

        {
            const double u = control_law_elevation(e1, e2, z2, x2c, x1, nn, g, p);
            const double acc = (p.elev_arm / p.elev_inertia) * u -
                               (p.gravity / p.elev_inertia) * p.mass * p.elev_arm *
                                   std::cos(x1) +
                               d;
            const double dxi2 = -g.k2 * xi2 - xi1 - g.n2 * odd_pow(xi2, g.h);
            const double dz2 = (acc - x2c) - dxi2;
            const double E = nn_residual(dz2, z1, z2, xi2, g.k2, g.m2, g.n2, g.h).residual;
            REQUIRE_THAT(E, WithinAbs(d - nn, 1e-10));
        }
        {
            const double u = control_law_pitch(e1, e2, z2, x2c, nn, g, p);
            const double acc = (p.pitch_arm / p.pitch_inertia) * u + d;
            const double dxi2 = -g.k2 * xi2 - xi1 - g.n2 * odd_pow(xi2, g.h);
            const double dz2 = (acc - x2c) - dxi2;
            const double E = nn_residual(dz2, z1, z2, xi2, g.k2, g.m2, g.n2, g.h).residual;
            REQUIRE_THAT(E, WithinAbs(d - nn, 1e-10));
        }
        {
            const double u = baseline_control_law_elevation(e1, e2, x2c, x1, nn, g, p);
            const double acc = (p.elev_arm / p.elev_inertia) * u -
                               (p.gravity / p.elev_inertia) * p.mass * p.elev_arm *
                                   std::cos(x1) +
                               d;
            const double dxi2 = -g.k2 * xi2 - xi1;
            const double dz2 = (acc - x2c) - dxi2;
            const double E = nn_residual(dz2, z1, z2, xi2, g.k2, 0.0, 0.0, g.h).residual;
            REQUIRE_THAT(E, WithinAbs(d - nn, 1e-10));
        }
    }
}

namespace {

ChannelController stock_channel(Variant v) {
    ChannelController c;
    c.channel = Channel::elevation;
    c.variant = v;
    c.net = make_diagonal_net(5, std::array<double, 2>{-0.5, -1.0},
                              std::array<double, 2>{0.5, 1.0}, 1.0);
    return c;
}

}  // namespace

TEST_CASE("priming starts the filters on their equilibria", "[controller]") {
    ChannelController c = stock_channel(Variant::proposed);
    const PlantState s{-24.0 * std::numbers::pi / 180.0, 0.0, 0.0, 0.0};
    const RefPoint ref = nominal_reference().eval(0.0);
    prime_channel(c, s, ref);

    CHECK(c.primed);
    CHECK_THAT(c.cmd_filter.signal, WithinRel(0.4590170295037973, 1e-12));
    CHECK(c.cmd_filter.deriv == 0.0);
    CHECK(c.rate_filter.signal == (0.0 - c.cmd_filter.signal) - 0.0);
    CHECK(c.rate_filter.deriv == 0.0);

    const ChannelSample sample = channel_sample(c, s, ref, PlantParams{});
    CHECK_THAT(sample.e1, WithinRel(-0.24434609527920612, 1e-13));
    CHECK(sample.z1 == sample.e1);
    CHECK(sample.nn_out == 0.0);  // zero-weight network
    CHECK(sample.alpha_m == c.cmd_filter.signal);
    CHECK(sample.lyapunov ==
          0.5 * (sample.z1 * sample.z1 + sample.z2 * sample.z2 + 0.0 + 0.0));
    CHECK(std::isfinite(sample.u));
}

TEST_CASE("sampling an unprimed channel is a logic error", "[controller]") {
    const ChannelController c = stock_channel(Variant::proposed);
    CHECK_THROWS_AS(channel_sample(c, PlantState{}, RefPoint{}, PlantParams{}),
                    std::logic_error);
}

TEST_CASE("channel ODE block assembles its parts verbatim", "[controller]") {
    ChannelController c = stock_channel(Variant::proposed);
    const std::array<double, kChannelOdeDim> y{0.1, -0.2, 0.3, 0.4, 0.5, -0.6};
    const ChannelOdeInputs in{0.25, 0.9};
    const auto d = channel_ode_derivatives(c, y, in);

    const CompensatorState dxi =
        compensation_derivatives({0.1, -0.2}, 0.3 - 0.25, c.gains);
    const HftdState dcmd = hftd_derivatives({0.3, 0.4}, 0.25, c.cmd_filter_cfg);
    const double z2_live = (0.9 - 0.3) - -0.2;
    const HftdState drate = hftd_derivatives({0.5, -0.6}, z2_live, c.rate_filter_cfg);
    CHECK(d[0] == dxi.xi1);
    CHECK(d[1] == dxi.xi2);
    CHECK(d[2] == dcmd.signal);
    CHECK(d[3] == dcmd.deriv);
    CHECK(d[4] == drate.signal);
    CHECK(d[5] == drate.deriv);

    // State pack/unpack round-trip.
    set_channel_ode_state(c, y);
    CHECK(channel_ode_state(c) == y);
}

TEST_CASE("zeroed fractional gains degenerate to the baseline exactly", "[controller]") {
    const auto degen = [](Variant v) {
        ChannelController c = stock_channel(v);
        c.gains.m1 = c.gains.m2 = c.gains.n1 = c.gains.n2 = 0.0;
        c.trainer.exponent = 1.0;
        return c;
    };
    ChannelController prop = degen(Variant::proposed);
    ChannelController base = degen(Variant::baseline);

    const PlantState s{-0.2, 0.3, 0.0, 0.0};
    const PlantParams params;
    const ReferenceSpec ref = nominal_reference();
    const double dt = 1e-4;
    for (int k = 0; k < 200; ++k) {
        const double t = k * dt;
        const RefPoint r = ref.eval(t);
        const ChannelStepResult rp = channel_step(prop, s, r, params, t, dt);
        const ChannelStepResult rb = channel_step(base, s, r, params, t, dt);
        REQUIRE(rp.diag.u == rb.diag.u);
        REQUIRE(rp.diag.alpha_m == rb.diag.alpha_m);
        REQUIRE(rp.diag.residual == rb.diag.residual);
        REQUIRE(rp.diag.nn_out == rb.diag.nn_out);
        REQUIRE(rp.diag.lyapunov == rb.diag.lyapunov);
        prop = rp.controller;
        base = rb.controller;
        REQUIRE(channel_ode_state(prop) == channel_ode_state(base));
    }
    for (std::size_t i = 0; i < prop.net.size(); ++i) {
        REQUIRE(prop.net.weights[i] == base.net.weights[i]);
        REQUIRE(prop.net.widths[i] == base.net.widths[i]);
    }
    for (std::size_t k = 0; k < prop.net.centers.size(); ++k) {
        REQUIRE(prop.net.centers[k] == base.net.centers[k]);
    }
}

TEST_CASE("the baseline trainer ignores the configured exponent", "[controller]") {
    ChannelController base = stock_channel(Variant::baseline);
    base.trainer.exponent = 0.6;
    ChannelController plain = stock_channel(Variant::baseline);
    plain.trainer.exponent = 1.0;
    // Seed nonzero weights so center/width updates engage too.
    for (std::size_t i = 0; i < base.net.size(); ++i) {
        base.net.weights[i] = 0.1 * static_cast<double>(i + 1);
        plain.net.weights[i] = 0.1 * static_cast<double>(i + 1);
    }
    const PlantState s{0.2, -0.4, 0.0, 0.0};
    channel_train(base, s, 1.3);
    channel_train(plain, s, 1.3);
    for (std::size_t i = 0; i < base.net.size(); ++i) {
        REQUIRE(base.net.weights[i] == plain.net.weights[i]);
        REQUIRE(base.net.widths[i] == plain.net.widths[i]);
    }
}

TEST_CASE("channel step rejects bad dt", "[controller]") {
    const ChannelController c = stock_channel(Variant::proposed);
    CHECK_THROWS_AS(channel_step(c, PlantState{}, RefPoint{}, PlantParams{}, 0.0, 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(channel_step(c, PlantState{}, RefPoint{}, PlantParams{}, 0.0, -1e-3),
                    std::domain_error);
}
