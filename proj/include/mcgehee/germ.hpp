#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mcgehee {

using Exponent = std::vector<int>;

/// Default tolerance under which a computed coefficient counts as zero
/// when detecting jets.
inline constexpr double kJetTolerance = 1e-12;

/// Truncated multivariate power series, stored as a sparse map from
/// exponent multi-index to coefficient. Degrees above `truncation()` are
/// unknown, not zero. Zero coefficients are never stored.
class Germ {
public:
    Germ() = default;
    Germ(int dim, int truncation);

    /// Builds a germ from (exponent, coefficient) pairs; repeated exponents are
    /// summed. Throws InputError on a bad multi-index.
    static Germ from_terms(int dim, int truncation,
                           const std::vector<std::pair<Exponent, double>>& terms);
    static Germ constant(int dim, int truncation, double value);
    /// The coordinate function x_i (0-based).
    static Germ coordinate(int dim, int truncation, int i);

    int dim() const { return dim_; }
    int truncation() const { return trunc_; }
    const std::map<Exponent, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent& alpha, double coeff);
    double coefficient(const Exponent& alpha) const;

    double evaluate(const Eigen::VectorXd& x) const;
    /// values[k] = homogeneous part of degree k evaluated at x, k = 0..truncation.
    std::vector<double> evaluate_graded(const Eigen::VectorXd& x) const;

    Germ derivative(int i) const;
    std::vector<Germ> gradient() const;
    std::vector<std::vector<Germ>> hessian() const;

    Germ homogeneous_part(int degree) const;
    /// Smallest degree carrying a coefficient with |c| > tol.
    std::optional<int> min_degree(double tol = 0.0) const;
    /// Distinct degrees with a coefficient above tol, ascending.
    std::vector<int> degrees(double tol = 0.0) const;

    Germ operator+(const Germ& other) const;
    Germ operator-(const Germ& other) const;
    Germ operator*(double s) const;
    Germ operator-() const { return *this * -1.0; }
    bool operator==(const Germ& other) const = default;

    /// Human readable form, lexicographic monomial order, e.g. "1*x2^2 - 1*x1^4".
    std::string to_string() const;
    /// Inverse of to_string; also accepts terms in any order. Throws InputError.
    static Germ parse(int dim, int truncation, const std::string& text);

private:
    void check_point(const Eigen::VectorXd& x) const;

    int dim_ = 0;
    int trunc_ = 0;
    std::map<Exponent, double> terms_;
};

inline Germ operator*(double s, const Germ& g) { return g * s; }

/// A germ whose stored terms all share one total degree.
class HomogeneousPoly {
public:
    HomogeneousPoly() = default;
    HomogeneousPoly(int dim, int degree);
    /// Throws InputError if `g` mixes degrees or a term has the wrong degree.
    HomogeneousPoly(const Germ& g, int degree);

    int dim() const { return poly_.dim(); }
    int degree() const { return degree_; }
    const Germ& germ() const { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }

    double evaluate(const Eigen::VectorXd& x) const { return poly_.evaluate(x); }
    Eigen::VectorXd gradient_at(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian_at(const Eigen::VectorXd& x) const;

private:
    void cache_derivatives();

    int degree_ = 0;
    Germ poly_;
    std::vector<Germ> grad_;
    std::vector<std::vector<Germ>> hess_;
};

struct Jet {
    int degree = 0;
    HomogeneousPoly poly;
};

/// First non-zero homogeneous part. Throws NoJetError on the zero germ.
Jet first_nonzero_jet(const Germ& g, double tol = kJetTolerance);
/// Next non-zero homogeneous part after the first; empty when g is
/// homogeneous up to its truncation order.
std::optional<Jet> second_nonzero_jet(const Germ& g, double tol = kJetTolerance);

/// w(r q) = r^d w_d(q) + r^{d+1} w_{>d}(r, q), with
/// w_{>d}(r, q) = sum_{j>=1} r^{j-1} tail[j-1](q).
struct RadialSplit {
    HomogeneousPoly base;
    std::vector<HomogeneousPoly> tail;

    int base_degree() const { return base.degree(); }
    /// w_{>d}(r, q); valid for any real r.
    double tail_value(double r, const Eigen::VectorXd& q) const;
    /// r^d w_d(q) + r^{d+1} w_{>d}(r, q).
    double reassemble(double r, const Eigen::VectorXd& q) const;
};

RadialSplit radial_split(const Germ& g, double tol = kJetTolerance);

}  // namespace mcgehee
