#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "routepe/types.hpp"

namespace routepe {

enum class PEMethod {
    nope,
    ape,
    sin,
    rope,
    rpe,
    alibi,
    laplacian,
    rwse,
    spd,
    dact_cpe,
    cycleformer,
    ipe,
    xpe,
    ipe_plus_xpe,
};

std::string to_string(PEMethod m);
PEMethod pe_method_from_string(const std::string& s);
const std::vector<PEMethod>& all_pe_methods();

enum class Direction { aware, invariant };
enum class FreqMode { paper_geometric, integer_harmonic };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);
std::string to_string(FreqMode f);
FreqMode freq_mode_from_string(const std::string& s);

struct PEConfig {
    PEMethod method = PEMethod::ipe_plus_xpe;
    int dim = 128;  // D, even
    Direction direction = Direction::invariant;
    // The literal geometric schedule omega_k = lambda^(-2k/D) breaks exact
    // endpoint equality for closed tours, so integer frequencies are the
    // default; the geometric schedule stays available for comparison.
    FreqMode freq_mode = FreqMode::integer_harmonic;
    int ipe_bands = 4;    // integer-harmonic IPE bands (clamped to D/2)
    int xpe_bands = 4;    // K, resolves up to 2^K angular sectors
    int graph_bands = 8;  // K for Laplacian eigenvectors / random-walk powers
    double lambda = 10000.0;
    int rpe_window = 16;  // W, signed-offset clip for the RPE table
    std::uint64_t seed = 0;
};

using Matrix = std::vector<std::vector<double>>;

// Row per instance node. Methods defined as attention biases fill `bias` and
// expose its rows as the probe vectors; everything else leaves it empty.
struct Embedding {
    Matrix vectors;
    Matrix bias;
};

// --- index-based encodings (one row per within-route position) ---

std::vector<double> encode_sin(int i, const PEConfig& cfg);

// Rotation by theta_k = i * lambda^(-2k/D) applied channel-pair-wise to a
// normalized all-ones reference vector; inner products depend on i - j only.
std::vector<double> encode_rope(int i, const PEConfig& cfg);

std::vector<double> encode_cycleformer(int i, int cycle_len, const PEConfig& cfg);

// Reflected binary Gray code.
std::uint32_t gray_code(std::uint32_t x);

// --- solution-level encodings (row per node) ---

Matrix encode_ape(const Instance& inst, const Solution& sol, const PEConfig& cfg);
Matrix encode_dact_cpe(const Instance& inst, const Solution& sol, const PEConfig& cfg);
Matrix encode_laplacian(const Instance& inst, const Solution& sol, const PEConfig& cfg);
Matrix encode_rwse(const Instance& inst, const Solution& sol, const PEConfig& cfg);

// Distance-indexed in-route encoding, one row per route position (so the two
// depot endpoints are separate rows; circularity means row 0 == row L-1).
Matrix encode_ipe(const Instance& inst, const Route& r, const PEConfig& cfg);

// Depot-anchored angular encoding, one row per node; depot row is zero.
Matrix encode_xpe(const Instance& inst, const PEConfig& cfg);

// --- attention-bias encodings (square matrix over nodes) ---

Matrix bias_rpe(const Instance& inst, const Solution& sol, const PEConfig& cfg);
Matrix bias_alibi(const Instance& inst, const Solution& sol, const PEConfig& cfg);
Matrix bias_spd(const Instance& inst, const Solution& sol, const PEConfig& cfg);

// Dispatcher. Deterministic in (inst, sol, cfg); bias methods derive their
// per-node vectors from the bias rows.
Embedding encode(const Instance& inst, const Solution& sol, const PEConfig& cfg);

// [x_v || IPE || XPE] per node (width 2 + D + D); optionally applies a seeded
// random linear projection back to D.
Matrix concat_pe(const Instance& inst, const Solution& sol, const PEConfig& cfg, bool project = false);

}  // namespace routepe
