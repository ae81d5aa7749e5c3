#pragma once

#include "jointorbit/errors.hpp"
#include "jointorbit/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jointorbit {

struct Interval {
    double lo = -1.0, hi = 1.0;
};

/// Open axis-aligned box; the computable stand-in for an open subset of the
/// chart. Sampling always lands strictly inside.
struct Region {
    std::vector<Interval> iv;
    int dim() const { return static_cast<int>(iv.size()); }
};

Region unit_box(int dim);

/// One infinitesimal generator: m coefficient expressions over the chart
/// coordinates.
struct VectorField {
    std::vector<Expr> coeff;
};

/// A Lie algebra basis of r vector fields on an m-dimensional coordinate
/// chart, plus optional named regions.
struct ActionSpec {
    std::string name;
    int m = 0;
    std::vector<std::string> coords;
    std::vector<VectorField> generators;
    std::map<std::string, Region> regions;
    bool analytic_hint = false;

    int r() const { return static_cast<int>(generators.size()); }
    // true when every coefficient converts to PolyForm (set at load)
    bool polynomial = false;
};

/// r vector-valued functions X -> R^q given by coordinate expressions.
struct FunctionFamily {
    std::string name;
    int p = 0;
    std::vector<std::string> xcoords;
    int q = 0;
    std::vector<std::vector<Expr>> functions; // r entries of q expressions

    int r() const { return static_cast<int>(functions.size()); }
    bool polynomial = false;
};

/// Sampling configuration shared by all randomized operations.
struct SampleCfg {
    long long trials = 32;
    std::uint64_t seed = 42;
    std::optional<Region> box;   // nullopt: unit box of the ambient dimension
    double tol = 1e-9;
    std::optional<bool> exact;   // force (true) / forbid (false); nullopt: auto

    void validate() const;
    Region box_for(int dim) const;
};

/// An n-point configuration. Float coordinates are always present; the
/// rational mirror exists when the tuple is exactly representable.
struct PointTuple {
    std::vector<std::vector<double>> pts;
    std::optional<std::vector<std::vector<Rational>>> exact;

    int order() const { return static_cast<int>(pts.size()); }
    int dim() const { return pts.empty() ? 0 : static_cast<int>(pts[0].size()); }
    bool has_exact() const { return exact.has_value(); }
};

// --- documents ------------------------------------------------------------

ActionSpec load_spec_text(const std::string& text);
ActionSpec load_spec_file(const std::string& path);
FunctionFamily load_family_text(const std::string& text);
FunctionFamily load_family_file(const std::string& path);

using Document = std::variant<ActionSpec, FunctionFamily>;
Document load_document_text(const std::string& text);

std::string serialize(const ActionSpec& spec);
std::string serialize(const FunctionFamily& fam);

// --- fixtures ---------------------------------------------------------------

const std::vector<std::string>& builtin_fixture_names();
const std::string& builtin_fixture_text(const std::string& name); // throws SpecError
Document builtin_fixture(const std::string& name);

// --- sampling ---------------------------------------------------------------

// Stream salts keep unrelated random uses of the same (seed, trial) apart.
inline constexpr std::uint64_t kSaltTuple = 0x746f706c65757031ull;
inline constexpr std::uint64_t kSaltFlow = 0x666c6f7773616c74ull;
inline constexpr std::uint64_t kSaltFiber = 0x6669626572736c74ull;
inline constexpr std::uint64_t kSaltVerify = 0x7665726966797074ull;
inline constexpr std::uint64_t kSaltComplete = 0x636f6d706c657431ull;

/// Counter-based generator: the stream for (seed, trial, salt) is a pure
/// function of those values, so parallel trials are order-independent.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt);
    std::uint64_t next();
    double unit();                                   // in [0, 1)
    double uniform(double lo, double hi);            // strictly inside (lo, hi)
    std::uint64_t below(std::uint64_t bound);        // unbiased in [0, bound)

  private:
    std::uint64_t state_;
};

/// n points uniform over cfg's box, deterministic in (cfg.seed, trial_index).
/// In exact mode coordinates are rationals k/d on a grid strictly inside the
/// box (d = 1000, deepened tenfold until the box holds at least 1000 grid
/// values per coordinate).
PointTuple sample_tuple(const ActionSpec& spec, int n, const SampleCfg& cfg,
                        std::uint64_t trial_index);

/// Same, over an explicit box (used for regions and function domains).
PointTuple sample_tuple_in(const Region& box, int n, bool exact, std::uint64_t seed,
                           std::uint64_t trial_index, std::uint64_t salt = kSaltTuple);

} // namespace jointorbit
