#include <cmath>

#include <doctest.h>

#include "edgetwin/rng.hpp"
#include "edgetwin/syncmodel.hpp"

using namespace edgetwin;

namespace {

// Straight-line recomputation in extended precision, independent of the
// library's code path.
long double oracle_uplink(long double gain, long double dist, long double alpha,
                          long double noise, long double bandwidth,
                          long double min_dist) {
    const long double d = dist < min_dist ? min_dist : dist;
    return bandwidth * std::log2(1.0L + gain * std::pow(d, -alpha) / noise);
}

struct Fixture {
    CavSample sample;
    AccessPoint ap;
    NetworkParams params;
};

Fixture random_fixture(Rng& rng, int server_count = 3) {
    Fixture f;
    f.sample.vehicle_id = 1;
    f.sample.status_bits = std::floor(rng.uniform(0.0, 1.0e5));
    f.sample.sensing_bits = std::floor(rng.uniform(1.0e4, 5.0e6));
    f.sample.position = {rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0)};
    f.sample.tx_power_gain_w = rng.uniform(0.05, 2.0);
    f.sample.cpu_ops = std::floor(rng.uniform(1.0, 2.0e6));
    f.sample.gpu_ops = std::floor(rng.uniform(0.0, 1.5e6));
    f.sample.store_ops = std::floor(rng.uniform(0.0, 1.0e6));
    f.ap.id = 0;
    f.ap.owner = 0;
    f.ap.position = {rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0)};
    f.ap.range = 2000.0;
    for (int e = 0; e < server_count; ++e)
        f.ap.hops_to.push_back(static_cast<int>(rng.uniform_int(1, 8)));
    f.params.bandwidth_hz = rng.uniform(1.0e6, 3.0e7);
    f.params.noise_power_w = std::exp(rng.uniform(std::log(1.0e-14), std::log(1.0e-10)));
    f.params.path_loss_exponent = rng.uniform(2.0, 4.0);
    f.params.per_hop_delay_s_per_bit = rng.uniform(0.0, 5.0e-9);
    f.params.sync_threshold_s = rng.uniform(0.005, 0.1);
    return f;
}

double rel_err(long double expected, double actual) {
    const long double diff = std::fabs(expected - static_cast<long double>(actual));
    const long double scale = std::max(std::fabs(expected), 1.0e-300L);
    return static_cast<double>(diff / scale);
}

}  // namespace

TEST_SUITE("syncmodel") {

TEST_CASE("payload size is the sum of status and sensing bits") {
    CavSample s;
    s.status_bits = 0.0;
    s.sensing_bits = 0.0;
    CHECK(payload_size(s) == 0.0);
    s.status_bits = 1000.0;
    s.sensing_bits = 9000.0;
    CHECK(payload_size(s) == 10000.0);

    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        s.status_bits = std::floor(rng.uniform(0.0, 1.0e6));
        s.sensing_bits = std::floor(rng.uniform(0.0, 1.0e7));
        CHECK(payload_size(s) == s.status_bits + s.sensing_bits);
    }
}

TEST_CASE("uplink rate at unit snr") {
    CavSample s;
    s.position = {0.0, 0.0};
    s.tx_power_gain_w = 1.0;
    AccessPoint ap;
    ap.position = {1.0, 0.0};
    NetworkParams p;
    p.bandwidth_hz = 1.0;
    p.noise_power_w = 1.0;
    p.path_loss_exponent = 2.0;
    CHECK(uplink_rate(s, ap, p) == doctest::Approx(1.0).epsilon(1e-15));

    // snr 3 -> log2(4) = 2
    s.tx_power_gain_w = 3.0;
    p.bandwidth_hz = 1.0e7;
    CHECK(uplink_rate(s, ap, p) == doctest::Approx(2.0e7).epsilon(1e-15));
}

TEST_CASE("uplink rate matches the formula oracle") {
    Rng rng(7);
    for (int i = 0; i < 300; ++i) {
        const Fixture f = random_fixture(rng);
        const double rate = uplink_rate(f.sample, f.ap, f.params);
        const long double expected = oracle_uplink(
            f.sample.tx_power_gain_w, distance(f.sample.position, f.ap.position),
            f.params.path_loss_exponent, f.params.noise_power_w, f.params.bandwidth_hz,
            f.params.min_distance_m);
        CHECK(rel_err(expected, rate) < 1e-12);
        CHECK(rate > 0.0);
    }
}

TEST_CASE("uplink rate decreases with distance") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        Fixture f = random_fixture(rng);
        f.sample.position = {0.0, 0.0};
        const double d1 = rng.uniform(2.0, 300.0);
        const double d2 = d1 + rng.uniform(1.0, 300.0);
        f.ap.position = {d1, 0.0};
        const double near = uplink_rate(f.sample, f.ap, f.params);
        f.ap.position = {d2, 0.0};
        const double far = uplink_rate(f.sample, f.ap, f.params);
        CHECK(far < near);
    }
}

TEST_CASE("zero distance is clamped to the configured minimum") {
    CavSample s;
    s.position = {5.0, 5.0};
    s.tx_power_gain_w = 1.0;
    AccessPoint ap;
    ap.position = {5.0, 5.0};
    NetworkParams p;
    p.bandwidth_hz = 1.0;
    p.noise_power_w = 1.0;
    p.path_loss_exponent = 2.0;
    p.min_distance_m = 1.0;
    CHECK(std::isfinite(uplink_rate(s, ap, p)));
    CHECK(uplink_rate(s, ap, p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wireless delay divides payload by rate") {
    CavSample s;
    s.position = {0.0, 0.0};
    s.tx_power_gain_w = 3.0;  // snr 3 at 1 m
    s.status_bits = 1.0e6;
    s.sensing_bits = 0.0;
    AccessPoint ap;
    ap.position = {1.0, 0.0};
    NetworkParams p;
    p.bandwidth_hz = 1.0e7;
    p.noise_power_w = 1.0;
    p.path_loss_exponent = 2.0;
    CHECK(wireless_delay(s, ap, p) == doctest::Approx(0.05).epsilon(1e-15));

    s.status_bits = 0.0;
    CHECK(wireless_delay(s, ap, p) == 0.0);

    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const Fixture f = random_fixture(rng);
        const double delay = wireless_delay(f.sample, f.ap, f.params);
        const long double rate = oracle_uplink(
            f.sample.tx_power_gain_w, distance(f.sample.position, f.ap.position),
            f.params.path_loss_exponent, f.params.noise_power_w, f.params.bandwidth_hz,
            f.params.min_distance_m);
        const long double payload = static_cast<long double>(f.sample.status_bits) +
                                    f.sample.sensing_bits;
        CHECK(rel_err(payload / rate, delay) < 1e-12);
    }
}

TEST_CASE("wired delay is per-bit per-hop") {
    NetworkParams p;
    p.per_hop_delay_s_per_bit = 1.0e-9;
    CHECK(wired_delay(1.0e6, 3, p) == doctest::Approx(3.0e-3).epsilon(1e-15));
    CHECK(wired_delay(0.0, 5, p) == 0.0);
    p.per_hop_delay_s_per_bit = 0.0;
    CHECK(wired_delay(1.0e9, 7, p) == 0.0);
}

TEST_CASE("processing delay takes the slowest dimension") {
    CavSample s;
    s.cpu_ops = 100.0;
    s.gpu_ops = 50.0;
    s.store_ops = 10.0;
    EdgeServer even(0, {1000.0, 1000.0, 1000.0}, {});
    CHECK(processing_delay(s, even) == doctest::Approx(0.1).epsilon(1e-15));

    s.cpu_ops = 0.0;
    s.gpu_ops = 0.0;
    s.store_ops = 10.0;
    EdgeServer store_bound(0, {1000.0, 1000.0, 100.0}, {});
    CHECK(processing_delay(s, store_bound) == doctest::Approx(0.1).epsilon(1e-15));

    Rng rng(10);
    for (int i = 0; i < 200; ++i) {
        const Fixture f = random_fixture(rng);
        ResourceVec cap{std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8))};
        EdgeServer srv(0, cap, {});
        const long double expected =
            std::max({static_cast<long double>(f.sample.cpu_ops) / cap.cpu,
                      static_cast<long double>(f.sample.gpu_ops) / cap.gpu,
                      static_cast<long double>(f.sample.store_ops) / cap.store});
        CHECK(rel_err(expected, processing_delay(f.sample, srv)) < 1e-12);
    }
}

TEST_CASE("doubling ops and capacities leaves processing delay unchanged") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        Fixture f = random_fixture(rng);
        ResourceVec cap{std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8))};
        EdgeServer srv(0, cap, {});
        const double base = processing_delay(f.sample, srv);

        f.sample.cpu_ops *= 2.0;
        f.sample.gpu_ops *= 2.0;
        f.sample.store_ops *= 2.0;
        EdgeServer doubled(0, {cap.cpu * 2.0, cap.gpu * 2.0, cap.store * 2.0}, {});
        CHECK(processing_delay(f.sample, doubled) == base);
    }
}

TEST_CASE("sync latency composes the three delays exactly") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const Fixture f = random_fixture(rng);
        ResourceVec cap{std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8))};
        EdgeServer srv(1, cap, {});
        const SyncBreakdown b = sync_latency(f.sample, f.ap, srv, f.params);

        CHECK(b.wireless_s == wireless_delay(f.sample, f.ap, f.params));
        CHECK(b.wired_s == wired_delay(payload_size(f.sample), f.ap.hops(1), f.params));
        CHECK(b.processing_s == processing_delay(f.sample, srv));
        CHECK(b.total_s == b.wireless_s + b.wired_s + b.processing_s);
        CHECK(b.within_threshold == (b.total_s <= f.params.sync_threshold_s));
    }
}

TEST_CASE("threshold flag follows the configured threshold") {
    CavSample s;
    s.position = {0.0, 0.0};
    s.tx_power_gain_w = 3.0;
    s.status_bits = 1.0e6;
    s.sensing_bits = 0.0;
    s.cpu_ops = 1.0e5;
    s.gpu_ops = 0.0;
    s.store_ops = 0.0;
    AccessPoint ap;
    ap.id = 0;
    ap.position = {1.0, 0.0};
    ap.hops_to = {3};
    NetworkParams p;
    p.bandwidth_hz = 1.0e7;
    p.noise_power_w = 1.0;
    p.path_loss_exponent = 2.0;
    p.per_hop_delay_s_per_bit = 1.0e-9;
    EdgeServer srv(0, {1.0e6, 1.0e6, 1.0e6}, {});

    // components 0.05 + 0.003 + 0.1 = 0.153
    p.sync_threshold_s = 0.2;
    SyncBreakdown b = sync_latency(s, ap, srv, p);
    CHECK(b.total_s == doctest::Approx(0.153).epsilon(1e-12));
    CHECK(b.within_threshold);

    p.sync_threshold_s = 0.1;
    b = sync_latency(s, ap, srv, p);
    CHECK_FALSE(b.within_threshold);
}

TEST_CASE("latency is monotone in payload, hops, distance and op counts") {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        Fixture f = random_fixture(rng);
        f.sample.position = {0.0, 0.0};
        f.ap.position = {rng.uniform(2.0, 300.0), 0.0};
        ResourceVec cap{std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8))};
        EdgeServer srv(0, cap, {});
        const double base = sync_latency(f.sample, f.ap, srv, f.params).total_s;

        Fixture bigger = f;
        bigger.sample.sensing_bits += 1.0e5;
        CHECK(sync_latency(bigger.sample, bigger.ap, srv, f.params).total_s >= base);

        Fixture hoppier = f;
        hoppier.ap.hops_to[0] += 2;
        CHECK(sync_latency(hoppier.sample, hoppier.ap, srv, f.params).total_s >= base);

        Fixture farther = f;
        farther.ap.position.x += 50.0;
        CHECK(sync_latency(farther.sample, farther.ap, srv, f.params).total_s >= base);

        Fixture heavier = f;
        heavier.sample.cpu_ops *= 2.0;
        CHECK(sync_latency(heavier.sample, heavier.ap, srv, f.params).total_s >= base);

        EdgeServer faster(0, {cap.cpu * 2.0, cap.gpu * 2.0, cap.store * 2.0}, {});
        CHECK(sync_latency(f.sample, f.ap, faster, f.params).total_s <= base);

        NetworkParams wider = f.params;
        wider.bandwidth_hz *= 2.0;
        CHECK(sync_latency(f.sample, f.ap, srv, wider).total_s <= base);
    }
}

TEST_CASE("sample validation enforces the field invariants") {
    CavSample s;
    s.status_bits = 100.0;
    s.sensing_bits = 0.0;
    s.tx_power_gain_w = 0.5;
    s.cpu_ops = 1.0;
    CHECK_NOTHROW(s.validate());

    CavSample zero_ops = s;
    zero_ops.cpu_ops = 0.0;
    CHECK_THROWS_AS(zero_ops.validate(), ValidationError);

    CavSample no_gain = s;
    no_gain.tx_power_gain_w = 0.0;
    CHECK_THROWS_AS(no_gain.validate(), ValidationError);

    CavSample negative = s;
    negative.sensing_bits = -1.0;
    CHECK_THROWS_AS(negative.validate(), ValidationError);
}

}  // TEST_SUITE
