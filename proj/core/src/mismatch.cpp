#include "galign/mismatch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "galign/errors.hpp"

namespace galign {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct VertexEdges {
    std::size_t via_m1 = kNone;
    std::size_t via_m2 = kNone;
};

std::size_t smallest_u(const ElementaryMisalignment& c) { return c.u_vertices.front(); }

}  // namespace

std::string to_string(ElementaryKind kind) {
    switch (kind) {
        case ElementaryKind::cycle: return "cycle";
        case ElementaryKind::even_path: return "even-path";
        case ElementaryKind::odd_path_pair: return "odd-path-pair";
    }
    return "?";
}

std::vector<ElementaryMisalignment> decompose(const PartialMapping& m1,
                                              const PartialMapping& m2) {
    validate_mapping(m1);
    validate_mapping(m2);
    if (m1.size() != m2.size()) {
        std::ostringstream msg;
        msg << "mappings must have equal size, got " << m1.size() << " and " << m2.size();
        throw SizeMismatch(msg.str());
    }

    std::set<std::pair<std::size_t, std::size_t>> shared;
    {
        std::set<std::pair<std::size_t, std::size_t>> first(m1.pairs.begin(), m1.pairs.end());
        for (const auto& p : m2.pairs) {
            if (first.count(p)) shared.insert(p);
        }
    }

    // Adjacency of the union multigraph without shared pairs. Injectivity
    // caps each vertex at one edge per mapping, so degrees are at most 2.
    std::map<std::size_t, VertexEdges> u_adj, v_adj;
    std::size_t edge_total = 0;
    auto add_edges = [&](const PartialMapping& m, bool is_m1) {
        for (const auto& [u, v] : m.pairs) {
            if (shared.count({u, v})) continue;
            if (is_m1) {
                u_adj[u].via_m1 = v;
                v_adj[v].via_m1 = u;
            } else {
                u_adj[u].via_m2 = v;
                v_adj[v].via_m2 = u;
            }
            ++edge_total;
        }
    };
    add_edges(m1, true);
    add_edges(m2, false);
    (void)edge_total;

    // Walk components. Alternation of m1/m2 edges is forced, so each
    // component is a path or a cycle.
    std::set<std::size_t> seen_u;
    struct RawComponent {
        std::vector<std::size_t> us, vs;
        std::size_t e1 = 0, e2 = 0;
    };
    std::vector<RawComponent> raw;
    for (const auto& [start_u, start_edges] : u_adj) {
        if (seen_u.count(start_u)) continue;
        RawComponent comp;
        std::set<std::size_t> comp_v;
        // Breadth-first over the component from start_u.
        std::vector<std::pair<bool, std::size_t>> queue{{true, start_u}};
        seen_u.insert(start_u);
        comp.us.push_back(start_u);
        while (!queue.empty()) {
            auto [is_u, id] = queue.back();
            queue.pop_back();
            if (is_u) {
                const VertexEdges& e = u_adj.find(id)->second;
                for (bool first : {true, false}) {
                    std::size_t v = first ? e.via_m1 : e.via_m2;
                    if (v == kNone) continue;
                    (first ? comp.e1 : comp.e2) += 1;
                    if (!comp_v.count(v)) {
                        comp_v.insert(v);
                        comp.vs.push_back(v);
                        queue.emplace_back(false, v);
                    }
                }
            } else {
                const VertexEdges& e = v_adj.find(id)->second;
                for (std::size_t u : {e.via_m1, e.via_m2}) {
                    if (u == kNone || seen_u.count(u)) continue;
                    seen_u.insert(u);
                    comp.us.push_back(u);
                    queue.emplace_back(true, u);
                }
            }
        }
        std::sort(comp.us.begin(), comp.us.end());
        std::sort(comp.vs.begin(), comp.vs.end());
        raw.push_back(std::move(comp));
    }

    std::vector<ElementaryMisalignment> closed;
    std::vector<ElementaryMisalignment> odd_m1_heavy, odd_m2_heavy;
    for (auto& comp : raw) {
        ElementaryMisalignment em;
        em.u_vertices = std::move(comp.us);
        em.v_vertices = std::move(comp.vs);
        em.size = comp.e1;
        if (comp.e1 == comp.e2) {
            std::size_t vertices = em.u_vertices.size() + em.v_vertices.size();
            em.kind = vertices == comp.e1 + comp.e2 ? ElementaryKind::cycle
                                                    : ElementaryKind::even_path;
            closed.push_back(std::move(em));
        } else if (comp.e1 == comp.e2 + 1) {
            odd_m1_heavy.push_back(std::move(em));
        } else {
            odd_m2_heavy.push_back(std::move(em));
        }
    }

    // The heavy counts balance because both mappings lost the same shared
    // pairs; pair them off by ascending smallest u-vertex.
    auto by_smallest_u = [](const ElementaryMisalignment& a, const ElementaryMisalignment& b) {
        return smallest_u(a) < smallest_u(b);
    };
    std::sort(odd_m1_heavy.begin(), odd_m1_heavy.end(), by_smallest_u);
    std::sort(odd_m2_heavy.begin(), odd_m2_heavy.end(), by_smallest_u);
    for (std::size_t i = 0; i < odd_m1_heavy.size(); ++i) {
        ElementaryMisalignment em;
        em.kind = ElementaryKind::odd_path_pair;
        auto& a = odd_m1_heavy[i];
        auto& b = odd_m2_heavy[i];
        em.size = a.size + b.size;
        em.u_vertices.resize(a.u_vertices.size() + b.u_vertices.size());
        std::merge(a.u_vertices.begin(), a.u_vertices.end(), b.u_vertices.begin(),
                   b.u_vertices.end(), em.u_vertices.begin());
        em.v_vertices.resize(a.v_vertices.size() + b.v_vertices.size());
        std::merge(a.v_vertices.begin(), a.v_vertices.end(), b.v_vertices.begin(),
                   b.v_vertices.end(), em.v_vertices.begin());
        closed.push_back(std::move(em));
    }

    std::sort(closed.begin(), closed.end(),
              [](const ElementaryMisalignment& a, const ElementaryMisalignment& b) {
                  return smallest_u(a) < smallest_u(b);
              });
    return closed;
}

MisalignmentReport count_errors(const AlignmentEstimate& est, const PartialMapping& truth) {
    validate_mapping(truth);
    for (const auto& [u, v] : est.pairs) {
        if (u >= truth.n_u || v >= truth.n_v) {
            std::ostringstream msg;
            msg << "estimate pair (" << u << ", " << v << ") out of range for " << truth.n_u
                << "x" << truth.n_v;
            throw ShapeError(msg.str());
        }
    }

    MisalignmentReport report;
    if (est.kind == EstimatorKind::threshold) {
        std::set<std::pair<std::size_t, std::size_t>> truth_set(truth.pairs.begin(),
                                                                truth.pairs.end());
        std::set<std::pair<std::size_t, std::size_t>> est_set(est.pairs.begin(), est.pairs.end());
        for (const auto& p : truth_set) {
            if (!est_set.count(p)) ++report.false_negatives;
        }
        for (const auto& p : est_set) {
            if (!truth_set.count(p)) ++report.false_positives;
        }
        report.errors = report.false_negatives + report.false_positives;
        return report;
    }

    std::vector<std::size_t> est_of(truth.n_u, kNone), truth_of(truth.n_u, kNone);
    for (const auto& [u, v] : est.pairs) {
        if (est_of[u] != kNone) throw ShapeError("estimate repeats a u index");
        est_of[u] = v;
    }
    for (const auto& [u, v] : truth.pairs) truth_of[u] = v;
    for (std::size_t u = 0; u < truth.n_u; ++u) {
        if (est_of[u] != truth_of[u]) ++report.errors;
    }

    // Decompose when the estimate is an injective mapping of the truth's size.
    std::set<std::size_t> est_vs;
    bool injective = true;
    for (const auto& [u, v] : est.pairs) injective = est_vs.insert(v).second && injective;
    if (injective && est.pairs.size() == truth.size()) {
        PartialMapping as_mapping{truth.n_u, truth.n_v, est.pairs};
        std::sort(as_mapping.pairs.begin(), as_mapping.pairs.end());
        report.components = decompose(truth, as_mapping);
    }
    return report;
}

ElementaryCountBounds elementary_count_bounds(std::size_t n, std::size_t s, std::size_t delta) {
    if (n < 1 || delta < 1) throw DomainError("need n >= 1 and delta >= 1");
    ElementaryCountBounds bounds;
    double n_pow = std::pow(static_cast<double>(n), static_cast<double>(delta));
    bounds.type1 = delta == 1 ? 0.0 : n_pow / static_cast<double>(delta);
    bounds.type2 = static_cast<double>(s) * n_pow;
    return bounds;
}

double misalignment_count_bound(std::size_t n, std::size_t s, std::size_t delta, double c) {
    if (n < 1 || delta < 1) throw DomainError("need n >= 1 and delta >= 1");
    if (!(c > 0.0)) throw DomainError("need c > 0");
    double d = static_cast<double>(delta);
    double log_n = std::log(static_cast<double>(n));
    if (d >= c * static_cast<double>(s)) {
        return std::exp(d * (1.0 + log_n + std::log1p(1.0 / c)));
    }
    return std::exp(d * (1.0 + std::log(static_cast<double>(n) * static_cast<double>(s) / d) +
                         std::log1p(c)));
}

std::vector<MisalignmentTally> misalignment_census(std::size_t n, std::size_t s) {
    if (n + s > 8) {
        std::ostringstream msg;
        msg << "enumeration guarded to n + s <= 8, got " << n << " + " << s;
        throw TooLarge(msg.str());
    }

    PartialMapping truth{n, n + s, {}};
    for (std::size_t u = 0; u < n; ++u) truth.pairs.emplace_back(u, u);

    std::vector<MisalignmentTally> census(n + 1);
    std::vector<std::size_t> image(n, 0);
    std::vector<bool> used(n + s, false);

    auto record = [&]() {
        std::size_t delta = 0;
        PartialMapping candidate{n, n + s, {}};
        for (std::size_t u = 0; u < n; ++u) {
            candidate.pairs.emplace_back(u, image[u]);
            if (image[u] != u) ++delta;
        }
        ++census[delta].mappings;
        if (delta == 0) return;
        auto components = decompose(truth, candidate);
        if (components.size() != 1) return;
        switch (components.front().kind) {
            case ElementaryKind::cycle: ++census[delta].type1; break;
            case ElementaryKind::even_path: ++census[delta].type2; break;
            case ElementaryKind::odd_path_pair: ++census[delta].type3; break;
        }
    };

    auto recurse = [&](auto&& self, std::size_t u) -> void {
        if (u == n) {
            record();
            return;
        }
        for (std::size_t v = 0; v < n + s; ++v) {
            if (used[v]) continue;
            used[v] = true;
            image[u] = v;
            self(self, u + 1);
            used[v] = false;
        }
    };
    recurse(recurse, 0);
    return census;
}

MisalignmentTally enumerate_misalignments(std::size_t n, std::size_t s, std::size_t delta) {
    auto census = misalignment_census(n, s);
    if (delta >= census.size()) return {};
    return census[delta];
}

}  // namespace galign
