#include <doctest.h>

#include <functional>

#include "gridsync/errors.hpp"
#include "gridsync/network.hpp"
#include "gridsync/torus.hpp"
#include "test_support.hpp"

using namespace gridsync;

namespace {

CouplingNetwork two_node(double d1 = 1.0, double d2 = 1.0, double phi12 = 0.0) {
    CouplingNetwork net;
    net.n = 2;
    net.damping = {d1, d2};
    net.natural_freq = {0.0, 0.0};
    net.coupling = Mat(2, 2, 0.0);
    net.coupling(0, 1) = net.coupling(1, 0) = 1.0;
    net.phase_shift = Mat(2, 2, 0.0);
    net.phase_shift(0, 1) = net.phase_shift(1, 0) = phi12;
    return net;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::shape_mismatch;
}

} // namespace

TEST_CASE("validate accepts a well-formed two-oscillator network") {
    CHECK_NOTHROW(validate(two_node()));
    // idempotent and side-effect-free
    const CouplingNetwork net = two_node();
    validate(net);
    CHECK_NOTHROW(validate(net));
}

TEST_CASE("validate rejects each broken invariant with its own code") {
    CHECK(code_of([] { validate(two_node(1.0, 1.0, kPi / 2.0)); }) == Errc::invalid_phase_shift);
    CHECK(code_of([] { validate(two_node(1.0, 0.0)); }) == Errc::invalid_damping);

    CouplingNetwork net = two_node();
    net.coupling(0, 0) = 0.5;
    CHECK(code_of([&] { validate(net); }) == Errc::nonzero_diagonal);

    net = two_node();
    net.coupling(0, 1) = -1.0;
    CHECK(code_of([&] { validate(net); }) == Errc::negative_coupling);

    net = two_node();
    net.damping = {1.0};
    CHECK(code_of([&] { validate(net); }) == Errc::shape_mismatch);

    net = two_node();
    net.inertia = Vec{1.0, -1.0};
    CHECK(code_of([&] { validate(net); }) == Errc::invalid_damping);
}

TEST_CASE("globally reachable node on canonical digraphs") {
    // complete graph
    CouplingNetwork net;
    net.n = 3;
    net.damping = {1, 1, 1};
    net.natural_freq = {0, 0, 0};
    net.coupling = Mat(3, 3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) net.coupling(i, i) = 0.0;
    net.phase_shift = Mat(3, 3, 0.0);
    CHECK(has_globally_reachable_node(GraphView::of(net)));

    // directed chain: P_21 > 0 and P_32 > 0 (1 influences 2 influences 3)
    net.coupling = Mat(3, 3, 0.0);
    net.coupling(1, 0) = 1.0;
    net.coupling(2, 1) = 1.0;
    CHECK(has_globally_reachable_node(GraphView::of(net)));

    // two disconnected pairs
    CouplingNetwork four;
    four.n = 4;
    four.damping = {1, 1, 1, 1};
    four.natural_freq = {0, 0, 0, 0};
    four.coupling = Mat(4, 4, 0.0);
    four.coupling(0, 1) = four.coupling(1, 0) = 1.0;
    four.coupling(2, 3) = four.coupling(3, 2) = 1.0;
    four.phase_shift = Mat(4, 4, 0.0);
    CHECK_FALSE(has_globally_reachable_node(GraphView::of(four)));

    // leaves listening to a hub agree on the hub state; the reverse does not
    CouplingNetwork star;
    star.n = 4;
    star.damping = {1, 1, 1, 1};
    star.natural_freq = {0, 0, 0, 0};
    star.coupling = Mat(4, 4, 0.0);
    star.phase_shift = Mat(4, 4, 0.0);
    for (std::size_t i = 1; i < 4; ++i) star.coupling(i, 0) = 1.0;
    CHECK(has_globally_reachable_node(GraphView::of(star)));
    CouplingNetwork hub_listens = star;
    hub_listens.coupling = Mat(4, 4, 0.0);
    for (std::size_t i = 1; i < 4; ++i) hub_listens.coupling(0, i) = 1.0;
    CHECK_FALSE(has_globally_reachable_node(GraphView::of(hub_listens)));
}

TEST_CASE("symmetry and completeness flags") {
    CouplingNetwork net = two_node();
    CHECK(is_symmetric(net));
    CHECK(is_complete(net));

    net.coupling(1, 0) = 0.0;
    CHECK_FALSE(is_symmetric(net));
    CHECK_FALSE(is_complete(net));

    // n=3 ring with one missing edge is symmetric but not complete
    CouplingNetwork ring;
    ring.n = 3;
    ring.damping = {1, 1, 1};
    ring.natural_freq = {0, 0, 0};
    ring.coupling = Mat(3, 3, 0.0);
    ring.coupling(0, 1) = ring.coupling(1, 0) = 1.0;
    ring.coupling(1, 2) = ring.coupling(2, 1) = 1.0;
    ring.phase_shift = Mat(3, 3, 0.0);
    CHECK(is_symmetric(ring));
    CHECK_FALSE(is_complete(ring));
    CHECK(is_connected(ring));

    // phi mismatch on a coupled pair breaks symmetry
    CouplingNetwork lossy = two_node(1.0, 1.0, 0.2);
    lossy.phase_shift(1, 0) = 0.3;
    CHECK_FALSE(is_symmetric(lossy));
    // but phi on an uncoupled pair is ignored
    CouplingNetwork sparse = ring;
    sparse.phase_shift(0, 2) = 0.4;
    CHECK(is_symmetric(sparse));
}

TEST_CASE("phi_max only looks at coupled pairs") {
    CouplingNetwork net = two_node(1.0, 1.0, 0.25);
    CHECK(phi_max(net) == doctest::Approx(0.25));
    CHECK_FALSE(is_lossless(net));

    CouplingNetwork ring;
    ring.n = 3;
    ring.damping = {1, 1, 1};
    ring.natural_freq = {0, 0, 0};
    ring.coupling = Mat(3, 3, 0.0);
    ring.coupling(0, 1) = ring.coupling(1, 0) = 1.0;
    ring.phase_shift = Mat(3, 3, 0.0);
    ring.phase_shift(1, 2) = 1.0; // no coupling there
    CHECK(phi_max(ring) == 0.0);
    CHECK(is_lossless(ring));
}

TEST_CASE("complete graphs always have a globally reachable node") {
    for (std::size_t n = 1; n <= 8; ++n) {
        CouplingNetwork net;
        net.n = n;
        net.damping.assign(n, 1.0);
        net.natural_freq.assign(n, 0.0);
        net.coupling = Mat(n, n, 1.0);
        for (std::size_t i = 0; i < n; ++i) net.coupling(i, i) = 0.0;
        net.phase_shift = Mat(n, n, 0.0);
        CHECK(has_globally_reachable_node(GraphView::of(net)));
    }
}

TEST_CASE("adding edges never destroys global reachability") {
    Rng rng(0x5eed0001);
    std::size_t checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + rng.index(5);
        CouplingNetwork net;
        net.n = n;
        net.damping.assign(n, 1.0);
        net.natural_freq.assign(n, 0.0);
        net.coupling = Mat(n, n, 0.0);
        net.phase_shift = Mat(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng.uniform() < 0.35) net.coupling(i, j) = 1.0;
        if (!has_globally_reachable_node(GraphView::of(net))) continue;
        ++checked;
        CouplingNetwork more = net;
        for (int extra = 0; extra < 3; ++extra) {
            const std::size_t i = rng.index(n), j = rng.index(n);
            if (i != j) more.coupling(i, j) = 1.0;
        }
        CHECK(has_globally_reachable_node(GraphView::of(more)));
    }
    CHECK(checked > 50);
}
