#pragma once

#include "bubbletree/graded_poly.hpp"
#include "bubbletree/laurent.hpp"
#include "bubbletree/rational.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bubbletree {

using IntVec = std::vector<long>;
using RatVec = std::vector<Rational>;

// Symmetric integer intersection form of a simply connected 4-manifold.
class IntersectionForm {
public:
    explicit IntersectionForm(std::vector<std::vector<long>> q);
    static IntersectionForm hyperbolic();
    static IntersectionForm diagonal(const std::vector<long>& entries);

    int rank() const { return static_cast<int>(q_.size()); }
    long entry(int i, int j) const { return q_[i][j]; }
    long pair(const IntVec& x, const IntVec& y) const;
    Rational pair(const IntVec& x, const RatVec& y) const;
    Rational pair(const RatVec& x, const RatVec& y) const;

    int b_plus() const;
    int b_minus() const;
    int signature() const { return b_plus() - b_minus(); }
    long euler_number() const { return 2 + rank(); }
    mpz_class determinant() const;
    bool unimodular() const;
    bool even() const;

    static IntersectionForm from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    std::vector<std::vector<long>> q_;
};

// alpha = c mod 2 and 0 > alpha^2 >= p1.
bool is_p_type_wall(const IntVec& alpha, const IntVec& c, long p1, const IntersectionForm& Q);

struct WallInvariants {
    long r = 0;  // (alpha^2 - p1) / 4
    long d = 0;  // -p1 - 3
    long N = 0;  // -alpha^2 - 2
    bool obstructed = false;  // alpha^2 == -1, outside residue scope
};
// Throws std::invalid_argument when 4 does not divide alpha^2 - p1 or
// alpha^2 < p1.
WallInvariants wall_invariants(long alpha_sq, long p1);

enum class EpsilonConvention { Signed, Unsigned };
// (-1)^{(c-alpha)^2/2}; the unsigned variant returns (c-alpha)^2/2 itself.
// Throws std::domain_error when (c-alpha)^2 is odd.
long epsilon(const IntVec& c, const IntVec& alpha, const IntersectionForm& Q,
             EpsilonConvention conv = EpsilonConvention::Signed);

struct Wall {
    IntVec alpha;
    long alpha_sq = 0;
    Rational t_star;  // Q(alpha, w_- + t (w_+ - w_-)) = 0
    Rational pair_minus, pair_plus;
    std::optional<WallInvariants> invariants;  // empty when 4 does not divide alpha^2 - p1
};

struct WallSearchOptions {
    bool collapse_sign = true;  // count alpha and -alpha once
    int t_samples = 64;
    double margin = 2.0;
};

struct WallSearch {
    std::vector<Wall> walls;       // strict crossings, sorted by (t*, alpha)
    std::vector<Wall> degenerate;  // alpha orthogonal to w_- or w_+
    IntVec box;                    // coordinate bounds scanned
};

// Candidate bound per coordinate from the positive definite majorant at
// sampled points of the segment.
IntVec wall_search_box(const IntersectionForm& Q, long p1, const RatVec& w_minus, const RatVec& w_plus,
                       const WallSearchOptions& opt = {});
WallSearch enumerate_walls(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& w_minus,
                           const RatVec& w_plus, const WallSearchOptions& opt = {});
WallSearch enumerate_walls_serial(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& w_minus,
                                  const RatVec& w_plus, const WallSearchOptions& opt = {});

// ---------------------------------------------------------------- delta

struct DeltaParams {
    Rational gamma_u_r0{-1, 2};  // u-coefficient of gamma (times Aalpha) at the r = 0 fixed point
    Rational gamma_u{1, 2};      // the same on the fixed loci of level r >= 1
    std::map<int, Rational> block_constant;  // C(t), default 1
    std::optional<Rational> chi;             // substituted when given
    std::optional<Rational> sigma;
    Rational block_constant_for(int t) const;
};

// Single-block series C(r) u^{1-N} int gamma^d / (-(u-alpha)^2 + p1(r))
// over the level-r fixed locus, with gamma = r omega + gamma_u Aalpha u,
// fiber pushforward and X integration applied. Its u^0 coefficient is the
// contribution of the partition (r).
EquivariantLaurent delta_block(int r, int d, const DeltaParams& params = {});

// [u^{n - 4t}] int_X pi_*(omega^n / (-(u-alpha)^2 + p1(t))), n = 0, 1, 2,
// with int_X alpha^2 = alpha_sq. Block symbols carry the suffix "_t".
GradedPolynomial block_moment(int t, int n, long alpha_sq, const DeltaParams& params = {});

struct DeltaPolynomial {
    int r = 0;
    int d = 0;
    GradedPolynomial poly;  // in Qsym, Aalpha and the coefficient symbols
    // Coefficient of Qsym^a Aalpha^{d-2a}, keyed by a.
    std::map<int, GradedPolynomial> by_qsym_power() const;
    // sum_{i=0}^{r} a_i Qsym^{r-i} Aalpha^{d-2r+2i}: every monomial has Qsym
    // weight 2 and Aalpha weight 1 summing to d.
    bool homogeneous_shape_ok() const;
    // The literal template sum_{i=0}^{r} a_i Qsym^{r-i} Aalpha^{d-2r-2i}.
    bool literal_shape_ok() const;
    // a_0..a_r in the homogeneous template.
    std::vector<GradedPolynomial> coefficients() const;
};

// Partitions of r in nonincreasing order.
std::vector<std::vector<int>> partitions(int r);
// delta of one partition.
GradedPolynomial delta_partition(const std::vector<int>& parts, int d, const DeltaParams& params = {});
// Sum over partitions of r. Throws std::logic_error if the result leaves
// the homogeneous template.
DeltaPolynomial delta_assemble(int r, int d, const DeltaParams& params = {});
DeltaPolynomial delta_assemble(const Wall& w, long p1, const DeltaParams& params = {});

struct WallCrossingSum {
    std::vector<std::pair<Wall, GradedPolynomial>> terms;  // epsilon * delta, Aalpha renamed per wall
    GradedPolynomial total;
};
// Wall i contributes with its pairing symbol Aalpha_i.
WallCrossingSum wall_crossing_difference(const std::vector<Wall>& walls, const std::vector<DeltaPolynomial>& deltas,
                                         const IntVec& c, const IntersectionForm& Q,
                                         EpsilonConvention conv = EpsilonConvention::Signed);

nlohmann::json wall_to_json(const Wall& w);
nlohmann::json delta_to_json(const DeltaPolynomial& d);

}  // namespace bubbletree
