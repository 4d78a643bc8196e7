#include "mcgehee/germ.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcgehee/errors.hpp"

namespace mcgehee {

namespace {

int total_degree(const Exponent& alpha) {
    return std::accumulate(alpha.begin(), alpha.end(), 0);
}

// powers[i][k] = x_i^k for k <= max_degree.
std::vector<std::vector<double>> power_table(const Eigen::VectorXd& x, int max_degree) {
    std::vector<std::vector<double>> powers(x.size(), std::vector<double>(max_degree + 1, 1.0));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (int k = 1; k <= max_degree; ++k) {
            powers[i][k] = powers[i][k - 1] * x[i];
        }
    }
    return powers;
}

}  // namespace

Germ::Germ(int dim, int truncation) : dim_(dim), trunc_(truncation) {
    if (dim < 1) {
        throw InputError("germ dimension must be positive");
    }
    if (truncation < 0) {
        throw InputError("germ truncation order must be non-negative");
    }
}

Germ Germ::from_terms(int dim, int truncation,
                      const std::vector<std::pair<Exponent, double>>& terms) {
    Germ g(dim, truncation);
    for (const auto& [alpha, c] : terms) {
        g.add_term(alpha, c);
    }
    return g;
}

Germ Germ::constant(int dim, int truncation, double value) {
    Germ g(dim, truncation);
    g.add_term(Exponent(dim, 0), value);
    return g;
}

Germ Germ::coordinate(int dim, int truncation, int i) {
    Germ g(dim, truncation);
    Exponent alpha(dim, 0);
    alpha.at(i) = 1;
    g.add_term(alpha, 1.0);
    return g;
}

void Germ::add_term(const Exponent& alpha, double coeff) {
    if (static_cast<int>(alpha.size()) != dim_) {
        throw InputError("exponent length " + std::to_string(alpha.size()) +
                         " does not match germ dimension " + std::to_string(dim_));
    }
    for (int e : alpha) {
        if (e < 0) {
            throw InputError("negative exponent in multi-index");
        }
    }
    if (total_degree(alpha) > trunc_) {
        throw InputError("term of degree " + std::to_string(total_degree(alpha)) +
                         " exceeds truncation order " + std::to_string(trunc_));
    }
    if (!std::isfinite(coeff)) {
        throw InputError("non-finite coefficient");
    }
    double& slot = terms_[alpha];
    slot += coeff;
    if (slot == 0.0) {
        terms_.erase(alpha);
    }
}

double Germ::coefficient(const Exponent& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

void Germ::check_point(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) {
        throw InputError("point dimension " + std::to_string(x.size()) +
                         " does not match germ dimension " + std::to_string(dim_));
    }
}

double Germ::evaluate(const Eigen::VectorXd& x) const {
    check_point(x);
    if (terms_.empty()) {
        return 0.0;
    }
    const auto powers = power_table(x, trunc_);
    double sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
        double m = c;
        for (int i = 0; i < dim_; ++i) {
            m *= powers[i][alpha[i]];
        }
        sum += m;
    }
    return sum;
}

std::vector<double> Germ::evaluate_graded(const Eigen::VectorXd& x) const {
    check_point(x);
    std::vector<double> values(trunc_ + 1, 0.0);
    if (terms_.empty()) {
        return values;
    }
    const auto powers = power_table(x, trunc_);
    for (const auto& [alpha, c] : terms_) {
        double m = c;
        int deg = 0;
        for (int i = 0; i < dim_; ++i) {
            m *= powers[i][alpha[i]];
            deg += alpha[i];
        }
        values[deg] += m;
    }
    return values;
}

Germ Germ::derivative(int i) const {
    if (i < 0 || i >= dim_) {
        throw InputError("derivative index out of range");
    }
    Germ d(dim_, std::max(trunc_ - 1, 0));
    for (const auto& [alpha, c] : terms_) {
        if (alpha[i] == 0) {
            continue;
        }
        Exponent beta = alpha;
        beta[i] -= 1;
        d.add_term(beta, c * alpha[i]);
    }
    return d;
}

std::vector<Germ> Germ::gradient() const {
    std::vector<Germ> grad;
    grad.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
        grad.push_back(derivative(i));
    }
    return grad;
}

std::vector<std::vector<Germ>> Germ::hessian() const {
    std::vector<std::vector<Germ>> hess(dim_);
    const auto grad = gradient();
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            hess[i].push_back(grad[i].derivative(j));
        }
    }
    return hess;
}

Germ Germ::homogeneous_part(int degree) const {
    Germ part(dim_, trunc_);
    for (const auto& [alpha, c] : terms_) {
        if (total_degree(alpha) == degree) {
            part.terms_.emplace(alpha, c);
        }
    }
    return part;
}

std::optional<int> Germ::min_degree(double tol) const {
    auto ds = degrees(tol);
    if (ds.empty()) {
        return std::nullopt;
    }
    return ds.front();
}

std::vector<int> Germ::degrees(double tol) const {
    std::vector<bool> present(trunc_ + 1, false);
    for (const auto& [alpha, c] : terms_) {
        if (std::abs(c) > tol) {
            present[total_degree(alpha)] = true;
        }
    }
    std::vector<int> out;
    for (int k = 0; k <= trunc_; ++k) {
        if (present[k]) {
            out.push_back(k);
        }
    }
    return out;
}

Germ Germ::operator+(const Germ& other) const {
    if (other.dim_ != dim_) {
        throw InputError("germ dimension mismatch in sum");
    }
    Germ sum(dim_, std::min(trunc_, other.trunc_));
    for (const Germ* g : {this, &other}) {
        for (const auto& [alpha, c] : g->terms_) {
            if (total_degree(alpha) <= sum.trunc_) {
                sum.add_term(alpha, c);
            }
        }
    }
    return sum;
}

Germ Germ::operator-(const Germ& other) const { return *this + (-other); }

Germ Germ::operator*(double s) const {
    Germ out(dim_, trunc_);
    if (s == 0.0) {
        return out;
    }
    for (const auto& [alpha, c] : terms_) {
        out.terms_.emplace(alpha, c * s);
    }
    return out;
}

std::string Germ::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [alpha, c] : terms_) {
        if (first) {
            os << c;
        } else {
            os << (c < 0 ? " - " : " + ") << std::abs(c);
        }
        first = false;
        for (int i = 0; i < dim_; ++i) {
            if (alpha[i] == 1) {
                os << "*x" << (i + 1);
            } else if (alpha[i] > 1) {
                os << "*x" << (i + 1) << "^" << alpha[i];
            }
        }
    }
    return os.str();
}

Germ Germ::parse(int dim, int truncation, const std::string& text) {
    Germ g(dim, truncation);
    size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    };
    auto fail = [&](const std::string& why) {
        throw InputError("cannot parse germ '" + text + "' at offset " + std::to_string(pos) + ": " + why);
    };
    auto read_int = [&] {
        const size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == start) {
            fail("expected an integer");
        }
        return std::stoi(text.substr(start, pos - start));
    };
    skip_space();
    if (text.compare(pos, std::string::npos, "0") == 0) {
        return g;
    }
    double sign = 1.0;
    bool first = true;
    while (true) {
        skip_space();
        if (pos >= text.size()) {
            if (first) {
                fail("empty input");
            }
            break;
        }
        if (!first) {
            if (text[pos] != '+' && text[pos] != '-') {
                fail("expected '+' or '-'");
            }
            sign = text[pos] == '-' ? -1.0 : 1.0;
            ++pos;
            skip_space();
        }
        size_t used = 0;
        double c = 0.0;
        try {
            c = std::stod(text.substr(pos), &used);
        } catch (const std::exception&) {
            fail("expected a coefficient");
        }
        pos += used;
        Exponent alpha(dim, 0);
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            if (pos >= text.size() || text[pos] != 'x') {
                fail("expected a variable x<i>");
            }
            ++pos;
            const int i = read_int();
            if (i < 1 || i > dim) {
                fail("variable index out of range");
            }
            int e = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                e = read_int();
            }
            alpha[i - 1] += e;
        }
        g.add_term(alpha, sign * c);
        first = false;
    }
    return g;
}

HomogeneousPoly::HomogeneousPoly(int dim, int degree) : degree_(degree), poly_(dim, degree) {
    cache_derivatives();
}

HomogeneousPoly::HomogeneousPoly(const Germ& g, int degree) : degree_(degree) {
    if (degree > g.truncation()) {
        throw InputError("homogeneous degree exceeds truncation order");
    }
    poly_ = Germ(g.dim(), degree);
    for (const auto& [alpha, c] : g.terms()) {
        if (total_degree(alpha) != degree) {
            throw InputError("term of degree " + std::to_string(total_degree(alpha)) +
                             " in a homogeneous polynomial of degree " + std::to_string(degree));
        }
        poly_.add_term(alpha, c);
    }
    cache_derivatives();
}

void HomogeneousPoly::cache_derivatives() {
    grad_ = poly_.gradient();
    hess_ = poly_.hessian();
}

Eigen::VectorXd HomogeneousPoly::gradient_at(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(dim());
    for (int i = 0; i < dim(); ++i) {
        g[i] = grad_[i].evaluate(x);
    }
    return g;
}

Eigen::MatrixXd HomogeneousPoly::hessian_at(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd h(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
            h(i, j) = hess_[i][j].evaluate(x);
        }
    }
    return h;
}

Jet first_nonzero_jet(const Germ& g, double tol) {
    auto d = g.min_degree(tol);
    if (!d) {
        throw NoJetError();
    }
    return Jet{*d, HomogeneousPoly(g.homogeneous_part(*d), *d)};
}

std::optional<Jet> second_nonzero_jet(const Germ& g, double tol) {
    auto ds = g.degrees(tol);
    if (ds.empty()) {
        throw NoJetError();
    }
    if (ds.size() < 2) {
        return std::nullopt;
    }
    return Jet{ds[1], HomogeneousPoly(g.homogeneous_part(ds[1]), ds[1])};
}

double RadialSplit::tail_value(double r, const Eigen::VectorXd& q) const {
    // Horner in r over the tail coefficients.
    double acc = 0.0;
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
        acc = acc * r + it->evaluate(q);
    }
    return acc;
}

double RadialSplit::reassemble(double r, const Eigen::VectorXd& q) const {
    const int d = base.degree();
    return std::pow(r, d) * base.evaluate(q) + std::pow(r, d + 1) * tail_value(r, q);
}

RadialSplit radial_split(const Germ& g, double tol) {
    Jet first = first_nonzero_jet(g, tol);
    RadialSplit split;
    split.base = first.poly;
    for (int k = first.degree + 1; k <= g.truncation(); ++k) {
        split.tail.emplace_back(g.homogeneous_part(k), k);
    }
    return split;
}

}  // namespace mcgehee
