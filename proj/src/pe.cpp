#include "routepe/pe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"
#include "routepe/rng.hpp"
#include "routepe/route_graph.hpp"

namespace routepe {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Seed tags keeping the per-method random tables on disjoint streams.
constexpr std::uint64_t kApeTag = 0xA9E1;
constexpr std::uint64_t kDactTag = 0xDAC7;
constexpr std::uint64_t kRpeTag = 0x59ED;
constexpr std::uint64_t kSpdTag = 0x59D0;
constexpr std::uint64_t kLapFlipTag = 0x1A9F;
constexpr std::uint64_t kProjTag = 0x9801;

void check_dim(const PEConfig& cfg) {
    if (cfg.dim <= 0 || cfg.dim % 2 != 0) {
        throw ConfigError("pe: dim must be a positive even integer");
    }
}

// omega_k = lambda^(-2k/D), the transformer schedule.
std::vector<double> geometric_freqs(int count, int dim, double lambda) {
    std::vector<double> w(count);
    for (int k = 0; k < count; ++k) w[k] = std::pow(lambda, -2.0 * k / dim);
    return w;
}

// omega_k = 2^k clamped to `cap`: unbounded doubling would push the phase
// error of sin(omega * 2pi) past the circularity tolerances.
std::vector<double> integer_freqs(int count, double cap) {
    std::vector<double> w(count);
    double f = 1.0;
    for (int k = 0; k < count; ++k) {
        w[k] = std::min(f, cap);
        if (f < cap) f *= 2.0;
    }
    return w;
}

std::vector<double> zero_row(int dim) { return std::vector<double>(dim, 0.0); }

std::vector<double> sincos_row(const std::vector<double>& freqs, double phase, int dim) {
    std::vector<double> row(dim, 0.0);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        row[2 * k] = std::sin(freqs[k] * phase);
        row[2 * k + 1] = std::cos(freqs[k] * phase);
    }
    return row;
}

}  // namespace

std::string to_string(PEMethod m) {
    switch (m) {
        case PEMethod::nope: return "nope";
        case PEMethod::ape: return "ape";
        case PEMethod::sin: return "sin";
        case PEMethod::rope: return "rope";
        case PEMethod::rpe: return "rpe";
        case PEMethod::alibi: return "alibi";
        case PEMethod::laplacian: return "laplacian";
        case PEMethod::rwse: return "rwse";
        case PEMethod::spd: return "spd";
        case PEMethod::dact_cpe: return "dact";
        case PEMethod::cycleformer: return "cycleformer";
        case PEMethod::ipe: return "ipe";
        case PEMethod::xpe: return "xpe";
        case PEMethod::ipe_plus_xpe: return "ipe+xpe";
    }
    return "nope";
}

PEMethod pe_method_from_string(const std::string& s) {
    for (PEMethod m : all_pe_methods()) {
        if (s == to_string(m)) return m;
    }
    if (s == "dact_cpe") return PEMethod::dact_cpe;
    throw ConfigError("unknown pe method: " + s);
}

const std::vector<PEMethod>& all_pe_methods() {
    static const std::vector<PEMethod> methods = {
        PEMethod::nope,     PEMethod::ape,         PEMethod::sin,  PEMethod::rope,
        PEMethod::rpe,      PEMethod::alibi,       PEMethod::laplacian, PEMethod::rwse,
        PEMethod::spd,      PEMethod::dact_cpe,    PEMethod::cycleformer, PEMethod::ipe,
        PEMethod::xpe,      PEMethod::ipe_plus_xpe,
    };
    return methods;
}

std::string to_string(Direction d) { return d == Direction::aware ? "aware" : "invariant"; }

Direction direction_from_string(const std::string& s) {
    if (s == "aware") return Direction::aware;
    if (s == "invariant") return Direction::invariant;
    throw ConfigError("unknown direction: " + s);
}

std::string to_string(FreqMode f) {
    return f == FreqMode::paper_geometric ? "geometric" : "integer";
}

FreqMode freq_mode_from_string(const std::string& s) {
    if (s == "geometric") return FreqMode::paper_geometric;
    if (s == "integer") return FreqMode::integer_harmonic;
    throw ConfigError("unknown frequency mode: " + s);
}

std::vector<double> encode_sin(int i, const PEConfig& cfg) {
    check_dim(cfg);
    const auto freqs = geometric_freqs(cfg.dim / 2, cfg.dim, cfg.lambda);
    return sincos_row(freqs, static_cast<double>(i), cfg.dim);
}

std::vector<double> encode_rope(int i, const PEConfig& cfg) {
    check_dim(cfg);
    const auto freqs = geometric_freqs(cfg.dim / 2, cfg.dim, cfg.lambda);
    const double ref = 1.0 / std::sqrt(static_cast<double>(cfg.dim));
    std::vector<double> row(cfg.dim);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double c = std::cos(freqs[k] * i);
        const double s = std::sin(freqs[k] * i);
        row[2 * k] = ref * c - ref * s;
        row[2 * k + 1] = ref * s + ref * c;
    }
    return row;
}

std::vector<double> encode_cycleformer(int i, int cycle_len, const PEConfig& cfg) {
    check_dim(cfg);
    if (cycle_len <= 0) throw ConfigError("cycleformer: cycle length must be positive");
    const auto freqs = cfg.freq_mode == FreqMode::paper_geometric
                           ? geometric_freqs(cfg.dim / 2, cfg.dim, cfg.lambda)
                           : integer_freqs(cfg.dim / 2, cfg.dim / 2.0);
    const double phase = kTwoPi * static_cast<double>(i) / cycle_len;
    return sincos_row(freqs, phase, cfg.dim);
}

std::uint32_t gray_code(std::uint32_t x) { return x ^ (x >> 1); }

Matrix encode_ape(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    check_dim(cfg);
    const NodePositions np = node_positions(inst, sol);
    // Trainless stand-in for the learnable table: each position row is a unit
    // normal draw on its own stream, so the table does not depend on how many
    // rows a particular solution needs.
    const std::uint64_t table_seed = stream_seed(cfg.seed, kApeTag);
    std::vector<std::vector<double>> table(np.max_pos + 1);
    for (int i = 0; i <= np.max_pos; ++i) {
        Rng row_rng(stream_seed(table_seed, static_cast<std::uint64_t>(i)));
        table[i].resize(cfg.dim);
        for (double& x : table[i]) x = row_rng.normal();
    }
    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    out[0] = table[0];
    for (int v = 1; v < inst.num_nodes(); ++v) {
        if (np.route[v] >= 0) out[v] = table[np.pos[v]];
    }
    return out;
}

Matrix encode_dact_cpe(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    check_dim(cfg);
    const NodePositions np = node_positions(inst, sol);
    int max_code = 1;
    for (int v = 0; v < inst.num_nodes(); ++v) max_code = std::max(max_code, np.cycle_len[v] - 1);
    const int bits = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(max_code))));

    Rng proj_rng(stream_seed(cfg.seed, kDactTag));
    Matrix proj(bits, std::vector<double>(cfg.dim));
    const double scale = 1.0 / std::sqrt(static_cast<double>(bits));
    for (auto& prow : proj) {
        for (double& x : prow) x = scale * proj_rng.normal();
    }

    auto project = [&](std::uint32_t code) {
        std::vector<double> row(cfg.dim, 0.0);
        for (int b = 0; b < bits; ++b) {
            if (code >> b & 1u) {
                for (int d = 0; d < cfg.dim; ++d) row[d] += proj[b][d];
            }
        }
        return row;
    };

    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    out[0] = project(gray_code(0));
    for (int v = 1; v < inst.num_nodes(); ++v) {
        if (np.route[v] < 0) continue;
        const std::uint32_t idx = static_cast<std::uint32_t>(np.pos[v] % np.cycle_len[v]);
        out[v] = project(gray_code(idx));
    }
    return out;
}

namespace {

// The invariant variant keeps cosines only and doubles the frequency count so
// the width stays at D.
std::vector<double> ipe_freqs(const PEConfig& cfg) {
    const bool invariant = cfg.direction == Direction::invariant;
    if (cfg.freq_mode == FreqMode::paper_geometric) {
        return geometric_freqs(invariant ? cfg.dim : cfg.dim / 2, cfg.dim, cfg.lambda);
    }
    const int bands = std::clamp(cfg.ipe_bands, 1, cfg.dim / 2);
    return integer_freqs(invariant ? 2 * bands : bands, cfg.dim / 2.0);
}

std::vector<double> ipe_phase_row(const std::vector<double>& freqs, double phase, const PEConfig& cfg) {
    if (cfg.direction == Direction::invariant) {
        std::vector<double> row(cfg.dim, 0.0);
        for (std::size_t k = 0; k < freqs.size(); ++k) row[k] = std::cos(freqs[k] * phase);
        return row;
    }
    return sincos_row(freqs, phase, cfg.dim);
}

}  // namespace

Matrix encode_ipe(const Instance& inst, const Route& r, const PEConfig& cfg) {
    check_dim(cfg);
    const std::vector<double> cum = cumulative_distances(inst, r);
    const double total = cum.back();
    if (!(total > 0.0)) throw NumericError("ipe: route has zero total length");

    const std::vector<double> freqs = ipe_freqs(cfg);
    Matrix out(r.nodes.size());
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        out[i] = ipe_phase_row(freqs, kTwoPi * (cum[i] / total), cfg);
    }
    return out;
}

Matrix encode_xpe(const Instance& inst, const PEConfig& cfg) {
    check_dim(cfg);
    if (2 * cfg.xpe_bands > cfg.dim) throw ConfigError("xpe: 2K must not exceed dim");
    const DepotAngles angles = depot_angles(inst);
    std::vector<double> freqs(cfg.xpe_bands);
    double f = 1.0;
    for (int k = 0; k < cfg.xpe_bands; ++k, f *= 2.0) freqs[k] = f;

    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    for (int v = 1; v < inst.num_nodes(); ++v) {
        out[v] = sincos_row(freqs, angles.theta[v], cfg.dim);
    }
    return out;
}

namespace {

// Compacts the route graph's present nodes for the dense eigen problems.
struct CompactGraph {
    std::vector<int> nodes;          // compact -> instance node
    std::vector<int> idx;            // instance node -> compact (-1 absent)
    Eigen::MatrixXd adjacency;
};

CompactGraph compact_graph(const Instance& inst, const Solution& sol) {
    const RouteGraph g = route_graph(inst, sol);
    CompactGraph c;
    c.idx.assign(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        if (g.present[v]) {
            c.idx[v] = static_cast<int>(c.nodes.size());
            c.nodes.push_back(v);
        }
    }
    const int m = static_cast<int>(c.nodes.size());
    c.adjacency = Eigen::MatrixXd::Zero(m, m);
    for (int v = 0; v < g.n; ++v) {
        for (int w : g.adj[v]) {
            c.adjacency(c.idx[v], c.idx[w]) = 1.0;
        }
    }
    return c;
}

}  // namespace

Matrix encode_laplacian(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    check_dim(cfg);
    const CompactGraph c = compact_graph(inst, sol);
    const int m = static_cast<int>(c.nodes.size());
    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    if (m < 2) return out;

    Eigen::MatrixXd lap = -c.adjacency;
    for (int i = 0; i < m; ++i) lap(i, i) = c.adjacency.row(i).sum();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    if (es.info() != Eigen::Success) {
        throw NumericError("laplacian: eigensolver failed to converge (nodes=" + std::to_string(m) + ")");
    }

    // Eigenvalues come sorted ascending; column 0 is the trivial constant
    // eigenvector of the connected route graph.
    const int keep = std::min(cfg.graph_bands, m - 1);
    Rng flip_rng(stream_seed(cfg.seed, kLapFlipTag));
    std::vector<double> flips(keep);
    for (double& s : flips) s = flip_rng.next_u64() & 1u ? 1.0 : -1.0;

    for (int i = 0; i < m; ++i) {
        auto& row = out[c.nodes[i]];
        for (int k = 0; k < keep && k < cfg.dim; ++k) {
            row[k] = flips[k] * es.eigenvectors()(i, k + 1);
        }
    }
    return out;
}

Matrix encode_rwse(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    check_dim(cfg);
    const CompactGraph c = compact_graph(inst, sol);
    const int m = static_cast<int>(c.nodes.size());
    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    if (m < 2) return out;

    Eigen::MatrixXd walk = c.adjacency;
    for (int i = 0; i < m; ++i) {
        const double degree = c.adjacency.row(i).sum();
        walk.row(i) /= degree;
    }

    const int powers = std::min(cfg.graph_bands, cfg.dim);
    Eigen::MatrixXd acc = walk;
    for (int k = 0; k < powers; ++k) {
        for (int i = 0; i < m; ++i) out[c.nodes[i]][k] = acc(i, i);
        if (k + 1 < powers) acc = acc * walk;
    }
    return out;
}

Matrix bias_rpe(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    if (cfg.rpe_window <= 0) throw ConfigError("rpe: window must be positive");
    const NodePositions np = node_positions(inst, sol);
    const int w = cfg.rpe_window;
    Rng table_rng(stream_seed(cfg.seed, kRpeTag));
    std::vector<double> table(2 * w + 1);
    for (double& x : table) x = table_rng.normal();

    const int n = inst.num_nodes();
    Matrix bias(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u) {
        if (u != 0 && np.route[u] < 0) continue;
        for (int v = 0; v < n; ++v) {
            if (v != 0 && np.route[v] < 0) continue;
            const int offset = std::clamp(np.pos[u] - np.pos[v], -w, w);
            bias[u][v] = table[offset + w];
        }
    }
    return bias;
}

Matrix bias_alibi(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    (void)cfg;
    const NodePositions np = node_positions(inst, sol);
    const double slope = 0.00390625;  // 2^-8, first slope of the geometric head schedule
    const int n = inst.num_nodes();
    Matrix bias(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u) {
        if (u != 0 && np.route[u] < 0) continue;
        for (int v = 0; v < n; ++v) {
            if (v != 0 && np.route[v] < 0) continue;
            bias[u][v] = -slope * std::abs(np.pos[u] - np.pos[v]);
        }
    }
    return bias;
}

Matrix bias_spd(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    const RouteGraph g = route_graph(inst, sol);
    const int n = inst.num_nodes();
    std::vector<std::vector<int>> hops(n);
    int diameter = 0;
    for (int u = 0; u < n; ++u) {
        if (!g.present[u]) continue;
        hops[u] = bfs_hops(g, u);
        for (int d : hops[u]) diameter = std::max(diameter, d);
    }

    // Trainless stand-in for the learned per-distance bias: learned spatial
    // biases fall off steeply over the first hops and flatten out, so the
    // table decreases geometrically with a seeded jitter rather than being
    // orderless noise.
    Rng table_rng(stream_seed(cfg.seed, kSpdTag));
    std::vector<double> table(diameter + 1);
    double step = 1.0;
    double level = 0.0;
    for (int d = 0; d <= diameter; ++d) {
        table[d] = level - 0.05 * step * table_rng.next_double();
        level -= step;
        step *= 0.6;
    }

    Matrix bias(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u) {
        if (!g.present[u]) continue;
        for (int v = 0; v < n; ++v) {
            if (!g.present[v] || hops[u][v] < 0) continue;
            bias[u][v] = table[hops[u][v]];
        }
    }
    return bias;
}

namespace {

// Maps route-position rows produced by encode_ipe onto instance nodes. The
// depot row carries phase 0, which is the same in every route.
Matrix ipe_node_rows(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    Matrix out(inst.num_nodes(), zero_row(cfg.dim));
    out[0] = ipe_phase_row(ipe_freqs(cfg), 0.0, cfg);
    for (const Route& r : sol.routes) {
        const Matrix rows = encode_ipe(inst, r, cfg);
        for (int i = 1; i + 1 < r.length(); ++i) out[r.nodes[i]] = rows[i];
    }
    return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    Matrix out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i];
        out[i].insert(out[i].end(), b[i].begin(), b[i].end());
    }
    return out;
}

}  // namespace

Embedding encode(const Instance& inst, const Solution& sol, const PEConfig& cfg) {
    check_dim(cfg);
    Embedding emb;
    const NodePositions np = node_positions(inst, sol);

    switch (cfg.method) {
        case PEMethod::nope:
            emb.vectors.assign(inst.num_nodes(), zero_row(cfg.dim));
            break;
        case PEMethod::ape:
            emb.vectors = encode_ape(inst, sol, cfg);
            break;
        case PEMethod::sin: {
            emb.vectors.assign(inst.num_nodes(), zero_row(cfg.dim));
            emb.vectors[0] = encode_sin(0, cfg);
            for (int v = 1; v < inst.num_nodes(); ++v) {
                if (np.route[v] >= 0) emb.vectors[v] = encode_sin(np.pos[v], cfg);
            }
            break;
        }
        case PEMethod::rope: {
            emb.vectors.assign(inst.num_nodes(), zero_row(cfg.dim));
            emb.vectors[0] = encode_rope(0, cfg);
            for (int v = 1; v < inst.num_nodes(); ++v) {
                if (np.route[v] >= 0) emb.vectors[v] = encode_rope(np.pos[v], cfg);
            }
            break;
        }
        case PEMethod::cycleformer: {
            emb.vectors.assign(inst.num_nodes(), zero_row(cfg.dim));
            emb.vectors[0] = encode_cycleformer(0, 1, cfg);
            for (int v = 1; v < inst.num_nodes(); ++v) {
                if (np.route[v] >= 0) {
                    emb.vectors[v] = encode_cycleformer(np.pos[v], np.cycle_len[v], cfg);
                }
            }
            break;
        }
        case PEMethod::dact_cpe:
            emb.vectors = encode_dact_cpe(inst, sol, cfg);
            break;
        case PEMethod::laplacian:
            emb.vectors = encode_laplacian(inst, sol, cfg);
            break;
        case PEMethod::rwse:
            emb.vectors = encode_rwse(inst, sol, cfg);
            break;
        case PEMethod::rpe:
            emb.bias = bias_rpe(inst, sol, cfg);
            emb.vectors = emb.bias;  // bias-profile rows are the probe vectors
            break;
        case PEMethod::alibi:
            emb.bias = bias_alibi(inst, sol, cfg);
            emb.vectors = emb.bias;
            break;
        case PEMethod::spd:
            emb.bias = bias_spd(inst, sol, cfg);
            emb.vectors = emb.bias;
            break;
        case PEMethod::ipe:
            emb.vectors = ipe_node_rows(inst, sol, cfg);
            break;
        case PEMethod::xpe:
            emb.vectors = encode_xpe(inst, cfg);
            break;
        case PEMethod::ipe_plus_xpe: {
            if (cfg.dim % 4 != 0) throw ConfigError("ipe+xpe: dim must be divisible by 4");
            PEConfig half = cfg;
            half.dim = cfg.dim / 2;
            if (2 * half.xpe_bands > half.dim) throw ConfigError("ipe+xpe: 2K exceeds dim/2");
            emb.vectors = hconcat(ipe_node_rows(inst, sol, half), encode_xpe(inst, half));
            break;
        }
    }
    return emb;
}

Matrix concat_pe(const Instance& inst, const Solution& sol, const PEConfig& cfg, bool project) {
    check_dim(cfg);
    const Matrix ipe = ipe_node_rows(inst, sol, cfg);
    const Matrix xpe = encode_xpe(inst, cfg);
    const int width = 2 + 2 * cfg.dim;

    Matrix out(inst.num_nodes());
    for (int v = 0; v < inst.num_nodes(); ++v) {
        auto& row = out[v];
        row.reserve(width);
        row.push_back(inst.coords[v].x);
        row.push_back(inst.coords[v].y);
        row.insert(row.end(), ipe[v].begin(), ipe[v].end());
        row.insert(row.end(), xpe[v].begin(), xpe[v].end());
    }
    if (!project) return out;

    // Seeded random linear map back to D, stand-in for the learned fusion.
    Rng proj_rng(stream_seed(cfg.seed, kProjTag));
    Matrix proj(width, std::vector<double>(cfg.dim));
    const double scale = 1.0 / std::sqrt(static_cast<double>(width));
    for (auto& prow : proj) {
        for (double& x : prow) x = scale * proj_rng.normal();
    }
    Matrix projected(inst.num_nodes(), zero_row(cfg.dim));
    for (int v = 0; v < inst.num_nodes(); ++v) {
        for (int in = 0; in < width; ++in) {
            const double x = out[v][in];
            if (x == 0.0) continue;
            for (int d = 0; d < cfg.dim; ++d) projected[v][d] += x * proj[in][d];
        }
    }
    return projected;
}

}  // namespace routepe
