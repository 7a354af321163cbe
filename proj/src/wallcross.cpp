#include "bubbletree/wallcross.hpp"

#include "bubbletree/json_io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bubbletree {

IntersectionForm::IntersectionForm(std::vector<std::vector<long>> q) : q_(std::move(q)) {
    const std::size_t n = q_.size();
    if (n == 0) throw std::invalid_argument("intersection form must have positive rank");
    for (std::size_t i = 0; i < n; ++i) {
        if (q_[i].size() != n) throw std::invalid_argument("intersection form must be square");
        for (std::size_t j = 0; j < i; ++j)
            if (q_[i][j] != q_[j][i]) throw std::invalid_argument("intersection form must be symmetric");
    }
}

IntersectionForm IntersectionForm::hyperbolic() { return IntersectionForm({{0, 1}, {1, 0}}); }

IntersectionForm IntersectionForm::diagonal(const std::vector<long>& entries) {
    std::vector<std::vector<long>> q(entries.size(), std::vector<long>(entries.size(), 0));
    for (std::size_t i = 0; i < entries.size(); ++i) q[i][i] = entries[i];
    return IntersectionForm(q);
}

long IntersectionForm::pair(const IntVec& x, const IntVec& y) const {
    if (static_cast<int>(x.size()) != rank() || static_cast<int>(y.size()) != rank())
        throw std::invalid_argument("vector length does not match the form rank");
    long s = 0;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j) s += x[i] * q_[i][j] * y[j];
    return s;
}

Rational IntersectionForm::pair(const IntVec& x, const RatVec& y) const {
    RatVec xr(x.begin(), x.end());
    return pair(xr, y);
}

Rational IntersectionForm::pair(const RatVec& x, const RatVec& y) const {
    if (static_cast<int>(x.size()) != rank() || static_cast<int>(y.size()) != rank())
        throw std::invalid_argument("vector length does not match the form rank");
    Rational s;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j)
            if (q_[i][j] != 0) s += x[i] * Rational(q_[i][j]) * y[j];
    return s;
}

namespace {

Eigen::VectorXd eigenvalues(const std::vector<std::vector<long>>& q) {
    const int n = static_cast<int>(q.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = static_cast<double>(q[i][j]);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

int IntersectionForm::b_plus() const {
    const auto ev = eigenvalues(q_);
    return static_cast<int>((ev.array() > 1e-9).count());
}

int IntersectionForm::b_minus() const {
    const auto ev = eigenvalues(q_);
    return static_cast<int>((ev.array() < -1e-9).count());
}

mpz_class IntersectionForm::determinant() const {
    // Fraction-free Gaussian elimination (Bareiss), exact in integers.
    const int n = rank();
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = q_[i][j];
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

bool IntersectionForm::unimodular() const {
    mpz_class d = determinant();
    return d == 1 || d == -1;
}

bool IntersectionForm::even() const {
    for (int i = 0; i < rank(); ++i)
        if (q_[i][i] % 2 != 0) return false;
    return true;
}

IntersectionForm IntersectionForm::from_json(const nlohmann::json& j) {
    if (j.is_array()) return IntersectionForm(j.get<std::vector<std::vector<long>>>());
    check_fields(j, {"schema", "matrix", "b_plus", "signature", "euler", "unimodular"}, "form");
    check_schema(j);
    IntersectionForm Q(j.at("matrix").get<std::vector<std::vector<long>>>());
    // Derived fields written by to_json are optional but must agree.
    const nlohmann::json derived = Q.to_json();
    for (const char* key : {"b_plus", "signature", "euler", "unimodular"})
        if (j.contains(key) && j.at(key) != derived.at(key))
            throw std::invalid_argument(std::string("form field '") + key + "' disagrees with the matrix");
    return Q;
}

nlohmann::json IntersectionForm::to_json() const {
    return {{"schema", kSchemaVersion},
            {"matrix", q_},
            {"b_plus", b_plus()},
            {"signature", signature()},
            {"euler", euler_number()},
            {"unimodular", unimodular()}};
}

bool is_p_type_wall(const IntVec& alpha, const IntVec& c, long p1, const IntersectionForm& Q) {
    if (alpha.size() != c.size() || static_cast<int>(alpha.size()) != Q.rank()) return false;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if ((alpha[i] - c[i]) % 2 != 0) return false;
    const long sq = Q.pair(alpha, alpha);
    return sq < 0 && sq >= p1;
}

WallInvariants wall_invariants(long alpha_sq, long p1) {
    if ((alpha_sq - p1) % 4 != 0)
        throw std::invalid_argument("alpha^2 - p1 = " + std::to_string(alpha_sq - p1) + " is not divisible by 4");
    if (alpha_sq < p1) throw std::invalid_argument("alpha^2 < p1: no level r >= 0");
    WallInvariants w;
    w.r = (alpha_sq - p1) / 4;
    w.d = -p1 - 3;
    w.N = -alpha_sq - 2;
    w.obstructed = alpha_sq == -1;
    return w;
}

long epsilon(const IntVec& c, const IntVec& alpha, const IntersectionForm& Q, EpsilonConvention conv) {
    IntVec diff(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) diff[i] = c[i] - alpha[i];
    const long sq = Q.pair(diff, diff);
    if (sq % 2 != 0) throw std::domain_error("(c - alpha)^2 = " + std::to_string(sq) + " is odd");
    const long half = sq / 2;
    if (conv == EpsilonConvention::Unsigned) return half;
    return half % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------- walls

IntVec wall_search_box(const IntersectionForm& Q, long p1, const RatVec& w_minus, const RatVec& w_plus,
                       const WallSearchOptions& opt) {
    const int n = Q.rank();
    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(i, j) = static_cast<double>(Q.entry(i, j));
    Eigen::VectorXd bound = Eigen::VectorXd::Zero(n);
    const int samples = std::max(2, opt.t_samples);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w(i) = (w_minus[i] + (w_plus[i] - w_minus[i]) * Rational(s, samples - 1)).to_double();
        const Eigen::VectorXd qw = q * w;
        const double ww = w.dot(qw);
        // x^T M x = 2 Q(x,w)^2 / Q(w,w) - Q(x,x) is positive definite when
        // b+ = 1 and equals -Q(x,x) on the wall through w.
        const Eigen::MatrixXd M = 2.0 * qw * qw.transpose() / ww - q;
        const Eigen::MatrixXd Minv = M.inverse();
        for (int i = 0; i < n; ++i) bound(i) = std::max(bound(i), std::sqrt(std::max(0.0, -p1 * Minv(i, i))));
    }
    IntVec box(n);
    for (int i = 0; i < n; ++i) box[i] = static_cast<long>(std::ceil(opt.margin * bound(i))) + 1;
    return box;
}

namespace {

void validate_search(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& wm, const RatVec& wp) {
    const int n = Q.rank();
    if (static_cast<int>(c.size()) != n || static_cast<int>(wm.size()) != n || static_cast<int>(wp.size()) != n)
        throw std::invalid_argument("vector lengths must match the form rank");
    if (Q.b_plus() != 1) throw std::invalid_argument("wall enumeration needs b+ = 1");
    if (p1 >= 0) throw std::invalid_argument("p1 must be negative");
    if (Q.pair(wm, wm).sign() <= 0 || Q.pair(wp, wp).sign() <= 0)
        throw std::invalid_argument("period points must have positive square");
    if (Q.pair(wm, wp).sign() <= 0)
        throw std::invalid_argument("period points lie in different components of the positive cone");
}

struct Scan {
    std::vector<Wall> walls;
    std::vector<Wall> degenerate;
};

// Every candidate with first coordinate x0 inside the box.
void scan_slice(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& wm, const RatVec& wp,
                const IntVec& box, long x0, Scan& out) {
    const int n = Q.rank();
    IntVec alpha(n, 0);
    alpha[0] = x0;
    auto visit = [&](auto&& self, int i) -> void {
        if (i == n) {
            if (!is_p_type_wall(alpha, c, p1, Q)) return;
            Wall w;
            w.alpha = alpha;
            w.alpha_sq = Q.pair(alpha, alpha);
            w.pair_minus = Q.pair(alpha, wm);
            w.pair_plus = Q.pair(alpha, wp);
            if (w.pair_minus.is_zero() || w.pair_plus.is_zero()) {
                out.degenerate.push_back(w);
                return;
            }
            if (w.pair_minus.sign() == w.pair_plus.sign()) return;
            w.t_star = w.pair_minus / (w.pair_minus - w.pair_plus);
            if ((w.alpha_sq - p1) % 4 == 0) w.invariants = wall_invariants(w.alpha_sq, p1);
            out.walls.push_back(w);
            return;
        }
        for (long x = -box[i]; x <= box[i]; ++x) {
            alpha[i] = x;
            self(self, i + 1);
        }
    };
    visit(visit, 1);
}

void finish(WallSearch& res, bool collapse) {
    auto by_key = [](const Wall& a, const Wall& b) {
        if (a.t_star != b.t_star) return a.t_star < b.t_star;
        return a.alpha < b.alpha;
    };
    if (collapse) {
        auto keep = [](const Wall& w) { return w.pair_minus.sign() < 0; };
        std::erase_if(res.walls, [&](const Wall& w) { return !keep(w); });
        // A degenerate pair is kept once, with its first nonzero coordinate positive.
        std::erase_if(res.degenerate, [](const Wall& w) {
            for (long x : w.alpha)
                if (x != 0) return x < 0;
            return false;
        });
    }
    std::sort(res.walls.begin(), res.walls.end(), by_key);
    std::sort(res.degenerate.begin(), res.degenerate.end(),
              [](const Wall& a, const Wall& b) { return a.alpha < b.alpha; });
}

}  // namespace

WallSearch enumerate_walls(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& w_minus,
                           const RatVec& w_plus, const WallSearchOptions& opt) {
    validate_search(Q, c, p1, w_minus, w_plus);
    WallSearch res;
    res.box = wall_search_box(Q, p1, w_minus, w_plus, opt);
    const long lo = -res.box[0], hi = res.box[0];
    const long count = hi - lo + 1;
    std::vector<Scan> slices(count);
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) scan_slice(Q, c, p1, w_minus, w_plus, res.box, lo + k, slices[k]);
    for (auto& s : slices) {
        res.walls.insert(res.walls.end(), s.walls.begin(), s.walls.end());
        res.degenerate.insert(res.degenerate.end(), s.degenerate.begin(), s.degenerate.end());
    }
    finish(res, opt.collapse_sign);
    return res;
}

WallSearch enumerate_walls_serial(const IntersectionForm& Q, const IntVec& c, long p1, const RatVec& w_minus,
                                  const RatVec& w_plus, const WallSearchOptions& opt) {
    validate_search(Q, c, p1, w_minus, w_plus);
    WallSearch res;
    res.box = wall_search_box(Q, p1, w_minus, w_plus, opt);
    Scan all;
    for (long x0 = -res.box[0]; x0 <= res.box[0]; ++x0) scan_slice(Q, c, p1, w_minus, w_plus, res.box, x0, all);
    res.walls = std::move(all.walls);
    res.degenerate = std::move(all.degenerate);
    finish(res, opt.collapse_sign);
    return res;
}

nlohmann::json wall_to_json(const Wall& w) {
    nlohmann::json j = {{"alpha", w.alpha},
                        {"alpha_sq", w.alpha_sq},
                        {"t_star", rational_to_json(w.t_star)},
                        {"pair_minus", rational_to_json(w.pair_minus)},
                        {"pair_plus", rational_to_json(w.pair_plus)}};
    if (w.invariants)
        j["invariants"] = {{"r", w.invariants->r},
                           {"d", w.invariants->d},
                           {"N", w.invariants->N},
                           {"obstructed", w.invariants->obstructed}};
    return j;
}

}  // namespace bubbletree
