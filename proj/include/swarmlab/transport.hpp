#pragma once

// Exact Monge-Kantorovich-Rubinstein (W1) distance between weighted discrete
// measures on phase space, with the optimal plan.
//
// Backend: primal network simplex on the dense bipartite transportation
// problem, with an artificial root basis, block pricing, and the
// strongly-feasible leaving-arc rule (last blocking arc met when traversing
// the cycle from the apex in the entering direction), so maximally degenerate
// uniform-weight instances terminate. Costs are evaluated on the fly from the
// point coordinates; only node-indexed tree state is stored.
//
// Equal-size uniform-weight inputs under kAssignmentCap atoms dispatch to a
// shortest-augmenting-path assignment solver instead; both backends agree to
// solver tolerance and are cross-checked in the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/rng.hpp"

namespace swarmlab {

struct DiscreteMeasure {
    std::size_t dim = 0;         // phase-space dimension (2d)
    std::vector<double> points;  // size() * dim, row-major
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t i) const { return points.data() + i * dim; }
    double* point(std::size_t i) { return points.data() + i * dim; }

    void validate() const {
        if (size() < 1) throw config_error("measure: needs at least one atom");
        if (points.size() != size() * dim) throw config_error("measure: point array size mismatch");
        double total = 0.0;
        for (double w : weights) {
            if (!(w > 0.0)) throw config_error("measure: weights must be strictly positive");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw config_error("measure: weights must sum to 1 (within 1e-12)");
    }
};

struct PlanEntry {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    double mass = 0.0;
};

struct TransportPlan {
    std::vector<PlanEntry> entries;
};

struct W1Result {
    double distance = 0.0;
    TransportPlan plan;
};

inline constexpr std::size_t kTransportSizeCap = 20000;
inline constexpr std::size_t kAssignmentCap = 512;

namespace detail {

inline double point_dist(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

// ------------------------------------------------------------------
// Network simplex for the dense transportation problem.
// ------------------------------------------------------------------
class TransportSimplex {
public:
    TransportSimplex(const DiscreteMeasure& mu, const DiscreteMeasure& nu)
        : mu_(mu), nu_(nu), m_(mu.size()), n_(nu.size()), root_(m_ + n_) {}

    W1Result solve() {
        init_tree();
        const std::int64_t arc_count = static_cast<std::int64_t>(m_) * static_cast<std::int64_t>(n_);
        const std::int64_t block =
            std::max<std::int64_t>(256, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arc_count))));
        const std::int64_t pivot_limit =
            2000LL * static_cast<std::int64_t>(m_ + n_ + 2) + 1000000LL;
        std::int64_t pivots = 0;
        std::int64_t scan_pos = 0;
        for (;;) {
            const std::int64_t entering = price(scan_pos, block, arc_count);
            if (entering < 0) break;
            pivot(static_cast<std::size_t>(entering / static_cast<std::int64_t>(n_)),
                  static_cast<std::size_t>(entering % static_cast<std::int64_t>(n_)));
            if (++pivots > pivot_limit)
                throw numeric_error("w1: network simplex exceeded pivot limit");
        }
        return extract();
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    const DiscreteMeasure& mu_;
    const DiscreteMeasure& nu_;
    std::size_t m_, n_, root_;

    // Node-indexed rooted tree. up_[c] is true when the natural flow
    // direction of the edge (c, parent_[c]) goes child -> parent.
    std::vector<std::size_t> parent_;
    std::vector<double> flow_;
    std::vector<char> up_;
    std::vector<std::size_t> depth_;
    std::vector<double> pi_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<char> basic_; // real arcs only, index i*n+j
    double big_ = 0.0;
    double tol_ = 0.0;

    double cost(std::size_t i, std::size_t j) const {
        return point_dist(mu_.point(i), nu_.point(j), mu_.dim);
    }

    std::size_t snk(std::size_t j) const { return m_ + j; }

    void init_tree() {
        // Upper bound on any arc cost from the coordinate ranges.
        double span2 = 0.0;
        for (std::size_t k = 0; k < mu_.dim; ++k) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = 0; i < m_; ++i) {
                lo = std::min(lo, mu_.point(i)[k]);
                hi = std::max(hi, mu_.point(i)[k]);
            }
            for (std::size_t j = 0; j < n_; ++j) {
                lo = std::min(lo, nu_.point(j)[k]);
                hi = std::max(hi, nu_.point(j)[k]);
            }
            span2 += (hi - lo) * (hi - lo);
        }
        const double max_cost = std::sqrt(span2);
        big_ = 1.0 + 2.0 * max_cost;
        tol_ = 1e-11 * (1.0 + max_cost);

        const std::size_t v = m_ + n_ + 1;
        parent_.assign(v, kNone);
        flow_.assign(v, 0.0);
        up_.assign(v, 0);
        depth_.assign(v, 0);
        pi_.assign(v, 0.0);
        children_.assign(v, {});
        basic_.assign(m_ * n_, 0);

        pi_[root_] = 0.0;
        children_[root_].reserve(m_ + n_);
        for (std::size_t i = 0; i < m_; ++i) {
            parent_[i] = root_;
            flow_[i] = mu_.weights[i];
            up_[i] = 1; // source -> root
            depth_[i] = 1;
            pi_[i] = -big_; // rc(i -> root) = big + pi[i] - pi[root] = 0
            children_[root_].push_back(i);
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t t = snk(j);
            parent_[t] = root_;
            flow_[t] = nu_.weights[j];
            up_[t] = 0; // root -> sink
            depth_[t] = 1;
            pi_[t] = big_;
            children_[root_].push_back(t);
        }
    }

    // Block pricing over the real arcs; returns the most negative arc of the
    // first block containing an improving arc, or -1 at optimality. Reduced
    // cost convention: rc(i->j) = c_ij + pi[i] - pi[j]; ties resolve to the
    // lowest arc index via strict improvement.
    std::int64_t price(std::int64_t& scan_pos, std::int64_t block, std::int64_t arc_count) {
        std::int64_t scanned = 0;
        std::int64_t best = -1;
        double best_rc = -tol_;
        while (scanned < arc_count) {
            const std::int64_t stop = std::min<std::int64_t>(scan_pos + block, arc_count);
            for (std::int64_t a = scan_pos; a < stop; ++a) {
                if (basic_[static_cast<std::size_t>(a)]) continue;
                const std::size_t i = static_cast<std::size_t>(a) / n_;
                const std::size_t j = static_cast<std::size_t>(a) % n_;
                const double rc = cost(i, j) + pi_[i] - pi_[snk(j)];
                if (rc < best_rc) {
                    best_rc = rc;
                    best = a;
                }
            }
            scanned += stop - scan_pos;
            scan_pos = stop == arc_count ? 0 : stop;
            if (best >= 0) return best;
        }
        return -1;
    }

    void pivot(std::size_t ei, std::size_t ej) {
        const std::size_t u = ei, w = snk(ej);
        // Tree paths from both endpoints to their lowest common ancestor.
        static thread_local std::vector<std::size_t> path_u, path_w;
        path_u.clear();
        path_w.clear();
        {
            std::size_t x = u, y = w;
            while (depth_[x] > depth_[y]) {
                path_u.push_back(x);
                x = parent_[x];
            }
            while (depth_[y] > depth_[x]) {
                path_w.push_back(y);
                y = parent_[y];
            }
            while (x != y) {
                path_u.push_back(x);
                x = parent_[x];
                path_w.push_back(y);
                y = parent_[y];
            }
        }

        // Flow changes along the cycle oriented u -> w. On the u-side the
        // cycle runs parent -> child, so edges with natural direction
        // child -> parent (up) decrease; on the w-side it runs
        // child -> parent, so down edges decrease.
        double delta = std::numeric_limits<double>::infinity();
        for (std::size_t c : path_u)
            if (up_[c]) delta = std::min(delta, flow_[c]);
        for (std::size_t c : path_w)
            if (!up_[c]) delta = std::min(delta, flow_[c]);

        // Leaving arc: the last blocking edge met when traversing the cycle
        // from the apex in the entering direction (keeps the tree strongly
        // feasible, so degenerate pivots cannot cycle). Cycle order from the
        // apex is: apex -> u (path_u reversed), entering arc, w -> apex
        // (path_w forward). The w-side therefore overrides the u-side, the
        // u-edge nearest u overrides earlier u-edges, and the w-edge nearest
        // the apex overrides earlier w-edges.
        std::size_t leave = kNone;
        bool leave_on_u_side = false;
        for (std::size_t idx = 0; idx < path_u.size(); ++idx) {
            const std::size_t c = path_u[idx]; // idx 0 is nearest u = last in cycle order
            if (up_[c] && flow_[c] == delta) {
                leave = c;
                leave_on_u_side = true;
                break;
            }
        }
        for (std::size_t idx = path_w.size(); idx-- > 0;) {
            const std::size_t c = path_w[idx]; // last idx is nearest apex = last in cycle order
            if (!up_[c] && flow_[c] == delta) {
                leave = c;
                leave_on_u_side = false;
                break;
            }
        }

        if (leave == kNone) throw numeric_error("w1: unbounded pivot (no blocking arc)");

        // Apply flow update.
        for (std::size_t c : path_u) flow_[c] += up_[c] ? -delta : delta;
        for (std::size_t c : path_w) flow_[c] += up_[c] ? delta : -delta;

        const double rc = cost(ei, ej) + pi_[u] - pi_[w];

        // Mark basis changes. The leaving edge (leave, parent(leave)) is a
        // real arc unless one endpoint is the root.
        mark_nonbasic(leave);
        basic_[ei * n_ + ej] = 1;

        // Re-hang the detached subtree (rooted at `leave`) through the
        // entering arc. The entering endpoint inside it becomes its new root.
        const std::size_t attach = leave_on_u_side ? u : w;
        const std::size_t other = leave_on_u_side ? w : u;
        reverse_path(attach, leave);
        // Attach `attach` below `other` via the entering arc.
        parent_[attach] = other;
        flow_[attach] = delta;
        // Natural direction of the entering arc is u -> w.
        up_[attach] = leave_on_u_side ? 1 : 0;
        children_[other].push_back(attach);

        // Potential shift is constant on the re-hung subtree.
        const double shift = leave_on_u_side ? -rc : rc;
        refresh_subtree(attach, shift);
    }

    void mark_nonbasic(std::size_t child) {
        const std::size_t p = parent_[child];
        if (child != root_ && p != root_) {
            const std::size_t i = child < m_ ? child : p;
            const std::size_t j = child < m_ ? p - m_ : child - m_;
            basic_[i * n_ + j] = 0;
        }
        auto& sib = children_[p];
        sib.erase(std::find(sib.begin(), sib.end(), child));
        parent_[child] = kNone;
    }

    // Reverses parent pointers along old chain attach -> ... -> top so that
    // `attach` becomes the local root of the detached component.
    void reverse_path(std::size_t attach, std::size_t top) {
        std::size_t child = attach;
        std::size_t p = parent_[child];
        double f = flow_[child];
        char dir = up_[child];
        // Detach `attach` from its old parent list.
        if (child != top) {
            auto& sib = children_[p];
            sib.erase(std::find(sib.begin(), sib.end(), child));
        }
        while (child != top) {
            const std::size_t gp = parent_[p];
            const double pf = flow_[p];
            const char pdir = up_[p];
            if (p != top) {
                auto& sib = children_[gp];
                sib.erase(std::find(sib.begin(), sib.end(), p));
            }
            // p becomes a child of `child`; the physical edge keeps its flow
            // and natural direction flips relative to the new child.
            parent_[p] = child;
            flow_[p] = f;
            up_[p] = dir ? 0 : 1;
            children_[child].push_back(p);
            child = p;
            p = gp;
            f = pf;
            dir = pdir;
        }
    }

    void refresh_subtree(std::size_t r, double shift) {
        static thread_local std::vector<std::size_t> stack;
        stack.clear();
        stack.push_back(r);
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            depth_[x] = depth_[parent_[x]] + 1;
            pi_[x] += shift;
            for (std::size_t c : children_[x]) stack.push_back(c);
        }
    }

    W1Result extract() {
        W1Result out;
        double value = 0.0;
        for (std::size_t c = 0; c < m_ + n_; ++c) {
            const std::size_t p = parent_[c];
            if (p == kNone || p == root_ || c == root_) {
                // A remaining artificial arc must be degenerate.
                if (p == root_ && flow_[c] > 1e-9)
                    throw numeric_error("w1: infeasible transportation basis");
                continue;
            }
            if (!(flow_[c] > 0.0)) continue;
            const std::size_t i = c < m_ ? c : p;
            const std::size_t j = c < m_ ? p - m_ : c - m_;
            out.plan.entries.push_back({static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(j), flow_[c]});
            value += flow_[c] * cost(i, j);
        }
        std::sort(out.plan.entries.begin(), out.plan.entries.end(),
                  [](const PlanEntry& a, const PlanEntry& b) {
                      return a.from != b.from ? a.from < b.from : a.to < b.to;
                  });
        out.distance = value;
        return out;
    }
};

// ------------------------------------------------------------------
// Shortest-augmenting-path assignment solver (square, uniform weights).
// ------------------------------------------------------------------
inline std::vector<std::size_t> solve_assignment(const DiscreteMeasure& mu,
                                                 const DiscreteMeasure& nu) {
    const std::size_t n = mu.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n, 0.0), v(n, 0.0), shortest(n, 0.0);
    std::vector<std::size_t> col4row(n, kTransportSizeCap + 1), row4col(n, kTransportSizeCap + 1),
        path(n, 0);
    std::vector<char> sr(n, 0), sc(n, 0);
    const std::size_t none = kTransportSizeCap + 1;

    for (std::size_t cur = 0; cur < n; ++cur) {
        std::fill(shortest.begin(), shortest.end(), inf);
        std::fill(sr.begin(), sr.end(), 0);
        std::fill(sc.begin(), sc.end(), 0);
        double min_val = 0.0;
        std::size_t i = cur;
        std::size_t sink = none;
        while (sink == none) {
            sr[i] = 1;
            double lowest = inf;
            std::size_t j_low = none;
            for (std::size_t j = 0; j < n; ++j) {
                if (sc[j]) continue;
                const double r = min_val + point_dist(mu.point(i), nu.point(j), mu.dim) -
                                 u[i] - v[j];
                if (r < shortest[j]) {
                    shortest[j] = r;
                    path[j] = i;
                }
                if (shortest[j] < lowest) {
                    lowest = shortest[j];
                    j_low = j;
                }
            }
            if (j_low == none) throw numeric_error("w1: assignment search stalled");
            min_val = lowest;
            if (row4col[j_low] == none)
                sink = j_low;
            else
                i = row4col[j_low];
            sc[j_low] = 1;
        }
        u[cur] += min_val;
        for (std::size_t k = 0; k < n; ++k) {
            if (sr[k] && k != cur) u[k] += min_val - shortest[col4row[k]];
            if (sc[k]) v[k] -= min_val - shortest[k];
        }
        // Augment.
        std::size_t j = sink;
        for (;;) {
            const std::size_t pi = path[j];
            row4col[j] = pi;
            std::swap(col4row[pi], j);
            if (pi == cur) break;
        }
    }
    return col4row;
}

inline bool uniform_weights(const DiscreteMeasure& mu) {
    const double w0 = 1.0 / static_cast<double>(mu.size());
    for (double w : mu.weights)
        if (std::abs(w - w0) > 1e-13) return false;
    return true;
}

} // namespace detail

// Exact W1 distance and an optimal plan. Ground cost is the Euclidean norm on
// the full phase-space coordinates.
inline W1Result w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    mu.validate();
    nu.validate();
    if (mu.dim != nu.dim) throw config_error("w1: dimension mismatch");
    if (mu.size() > kTransportSizeCap || nu.size() > kTransportSizeCap)
        throw size_cap_error("w1: more than 20000 atoms per side; subsample the inputs "
                             "(transport::subsample) and retry");
    if (mu.size() == nu.size() && mu.size() <= kAssignmentCap &&
        detail::uniform_weights(mu) && detail::uniform_weights(nu)) {
        const auto col4row = detail::solve_assignment(mu, nu);
        W1Result out;
        const double mass = 1.0 / static_cast<double>(mu.size());
        double value = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const std::size_t j = col4row[i];
            out.plan.entries.push_back(
                {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), mass});
            value += mass * detail::point_dist(mu.point(i), nu.point(j), mu.dim);
        }
        out.distance = value;
        return out;
    }
    detail::TransportSimplex solver(mu, nu);
    return solver.solve();
}

// Exhaustive reference solver for tests: permutation enumeration for uniform
// equal sizes up to 8 atoms, spanning-tree vertex enumeration for general
// weights up to 6 atoms per side (bounded enumeration count).
inline double w1_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    mu.validate();
    nu.validate();
    if (mu.dim != nu.dim) throw config_error("w1_bruteforce: dimension mismatch");
    const std::size_t m = mu.size(), n = nu.size();

    if (m == n && m <= 8 && detail::uniform_weights(mu) && detail::uniform_weights(nu)) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                c += detail::point_dist(mu.point(i), nu.point(perm[i]), mu.dim);
            best = std::min(best, c / static_cast<double>(n));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    if (m > 6 || n > 6)
        throw size_cap_error("w1_bruteforce: capped at 6 atoms per side for general weights");
    double assignments = std::pow(static_cast<double>(m), static_cast<double>(n)) *
                         std::pow(static_cast<double>(n), static_cast<double>(m - 1));
    if (assignments > 8e6)
        throw size_cap_error("w1_bruteforce: vertex enumeration too large for this size pair");

    // Enumerate all spanning trees of the complete bipartite support graph as
    // parent assignments (root = source 0; sinks pick a source parent,
    // sources >= 1 pick a sink parent), pruning cycles with a rollback
    // union-find. Each tree determines the unique basic flow by leaf
    // elimination; feasible ones are candidate vertices of the polytope.
    const std::size_t v_count = m + n; // sources 0..m-1, sinks m..m+n-1
    std::vector<std::size_t> uf(v_count);
    std::iota(uf.begin(), uf.end(), 0);
    std::vector<std::size_t> uf_size(v_count, 1);
    std::vector<std::pair<std::size_t, std::size_t>> undo; // (child_root, old_size_of_parent)

    auto find = [&](std::size_t x) {
        while (uf[x] != x) x = uf[x];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) -> bool {
        std::size_t ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (uf_size[ra] > uf_size[rb]) std::swap(ra, rb);
        uf[ra] = rb;
        undo.emplace_back(ra, uf_size[rb]);
        uf_size[rb] += uf_size[ra];
        return true;
    };
    auto rollback = [&](std::size_t mark) {
        while (undo.size() > mark) {
            auto [child, old_size] = undo.back();
            undo.pop_back();
            uf_size[uf[child]] = old_size;
            uf[child] = child;
        }
    };

    // Node assignment order: sinks first, then sources 1..m-1.
    const std::size_t slots = n + (m - 1);
    std::vector<std::size_t> parent(v_count, v_count);
    double best = std::numeric_limits<double>::infinity();

    std::vector<double> net(v_count), flow_cost;
    std::vector<std::size_t> deg(v_count), order;

    std::function<void(std::size_t)> dfs = [&](std::size_t slot) {
        if (slot == slots) {
            // Complete tree: solve flows by leaf elimination.
            for (std::size_t i = 0; i < m; ++i) net[i] = mu.weights[i];
            for (std::size_t j = 0; j < n; ++j) net[m + j] = -nu.weights[j];
            std::fill(deg.begin(), deg.end(), 0);
            for (std::size_t x = 0; x < v_count; ++x)
                if (x != 0) {
                    ++deg[x];
                    ++deg[parent[x]];
                }
            order.clear();
            for (std::size_t x = 1; x < v_count; ++x)
                if (deg[x] == 1) order.push_back(x);
            double total = 0.0;
            bool feasible = true;
            std::size_t processed = 0;
            while (!order.empty()) {
                const std::size_t leaf = order.back();
                order.pop_back();
                const std::size_t p = parent[leaf];
                const double gamma = leaf < m ? net[leaf] : -net[leaf];
                if (gamma < -1e-12) {
                    feasible = false;
                    break;
                }
                const std::size_t i = leaf < m ? leaf : p;
                const std::size_t j = leaf < m ? p - m : leaf - m;
                if (gamma > 0.0)
                    total += gamma * detail::point_dist(mu.point(i), nu.point(j), mu.dim);
                net[p] += net[leaf];
                ++processed;
                if (--deg[p] == 1 && p != 0) order.push_back(p);
            }
            if (feasible && processed == v_count - 1) best = std::min(best, total);
            return;
        }
        const std::size_t node = slot < n ? m + slot : slot - n + 1;
        const std::size_t choices = slot < n ? m : n;
        for (std::size_t c = 0; c < choices; ++c) {
            const std::size_t par = slot < n ? c : m + c;
            const std::size_t mark = undo.size();
            if (!unite(node, par)) continue;
            parent[node] = par;
            dfs(slot + 1);
            rollback(mark);
        }
        parent[node] = v_count;
    };
    dfs(0);
    return best;
}

// Built-in 1-Lipschitz test functions on phase space for duality checks.
struct LipschitzFn {
    enum class Kind { Coordinate, DistanceTo, ClippedLinear } kind = Kind::Coordinate;
    std::size_t coord = 0;
    std::vector<double> anchor; // DistanceTo point / ClippedLinear direction
    double offset = 0.0, lo = 0.0, hi = 0.0;

    static LipschitzFn coordinate(std::size_t k) {
        LipschitzFn f;
        f.kind = Kind::Coordinate;
        f.coord = k;
        return f;
    }
    static LipschitzFn distance_to(std::vector<double> p) {
        LipschitzFn f;
        f.kind = Kind::DistanceTo;
        f.anchor = std::move(p);
        return f;
    }
    // phi(z) = clamp(u.z + offset, lo, hi) with |u| normalized to 1.
    static LipschitzFn clipped_linear(std::vector<double> dir, double offset, double lo,
                                      double hi) {
        LipschitzFn f;
        f.kind = Kind::ClippedLinear;
        double nrm = 0.0;
        for (double d : dir) nrm += d * d;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) throw config_error("clipped_linear: zero direction");
        for (double& d : dir) d /= nrm;
        f.anchor = std::move(dir);
        f.offset = offset;
        f.lo = lo;
        f.hi = hi;
        return f;
    }

    double operator()(const double* z, std::size_t dim) const {
        switch (kind) {
        case Kind::Coordinate: return z[coord];
        case Kind::DistanceTo: return detail::point_dist(z, anchor.data(), dim);
        case Kind::ClippedLinear: {
            double s = offset;
            for (std::size_t k = 0; k < dim; ++k) s += anchor[k] * z[k];
            return clamp(s, lo, hi);
        }
        }
        return 0.0;
    }
};

// |int phi dmu - int phi dnu| for a certified 1-Lipschitz phi; bounded by
// w1(mu, nu) by weak duality.
inline double dual_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const LipschitzFn& fn) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) a += mu.weights[i] * fn(mu.point(i), mu.dim);
    for (std::size_t j = 0; j < nu.size(); ++j) b += nu.weights[j] * fn(nu.point(j), nu.dim);
    return std::abs(a - b);
}

// Push-forward of mu through a pointwise map; weights are unchanged.
inline DiscreteMeasure
push_forward(const DiscreteMeasure& mu,
             const std::function<void(const double*, double*)>& map) {
    DiscreteMeasure out;
    out.dim = mu.dim;
    out.weights = mu.weights;
    out.points.resize(mu.points.size());
    for (std::size_t i = 0; i < mu.size(); ++i) map(mu.point(i), out.point(i));
    return out;
}

// Seeded i.i.d. subsample with uniform output weights, for inputs beyond the
// solver size cap.
inline DiscreteMeasure subsample(const DiscreteMeasure& mu, std::size_t count,
                                 std::uint64_t seed) {
    if (count < 1) throw config_error("subsample: count must be >= 1");
    std::vector<double> cdf(mu.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += mu.weights[i];
        cdf[i] = acc;
    }
    Rng rng(seed);
    DiscreteMeasure out;
    out.dim = mu.dim;
    out.weights.assign(count, 1.0 / static_cast<double>(count));
    out.points.resize(count * mu.dim);
    for (std::size_t k = 0; k < count; ++k) {
        const double r = rng.uniform01() * acc;
        const std::size_t i = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
        const double* src = mu.point(std::min(i, mu.size() - 1));
        std::copy(src, src + mu.dim, out.point(k));
    }
    return out;
}

} // namespace swarmlab
