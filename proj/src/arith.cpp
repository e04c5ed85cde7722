#include "sha_predict/arith.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "sha_predict/errors.hpp"

namespace sha_predict {

std::int64_t isqrt(std::int64_t n)
{
    if (n < 0) {
        throw InputError("isqrt of a negative number");
    }
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

bool is_square(std::int64_t n)
{
    if (n < 0) {
        return false;
    }
    const auto r = isqrt(n);
    return r * r == n;
}

bool is_squarefree(std::int64_t n)
{
    if (n == 0) {
        return false;
    }
    for (const auto& [p, e] : factorize(n)) {
        if (e > 1) {
            return false;
        }
    }
    return true;
}

bool is_prime(std::int64_t n)
{
    if (n < 2) {
        return false;
    }
    if (n % 2 == 0) {
        return n == 2;
    }
    for (std::int64_t p = 3; p * p <= n; p += 2) {
        if (n % p == 0) {
            return false;
        }
    }
    return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    if (n == 0) {
        throw InputError("cannot factor 0");
    }
    std::uint64_t m = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            out.emplace_back(static_cast<std::int64_t>(p), e);
        }
    }
    if (m > 1) {
        out.emplace_back(static_cast<std::int64_t>(m), 1);
    }
    return out;
}

bool is_quadratic_discriminant(std::int64_t disc)
{
    if (disc == 0 || is_square(disc)) {
        return false;
    }
    const auto r = ((disc % 4) + 4) % 4;
    return r == 0 || r == 1;
}

int kronecker(std::int64_t a, std::int64_t n)
{
    if (n == 0) {
        throw InputError("kronecker symbol with n = 0");
    }
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) {
            result = -1;
        }
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) {
            return 0;
        }
        int v = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++v;
        }
        const auto r8 = ((a % 8) + 8) % 8;
        if ((v & 1) && (r8 == 3 || r8 == 5)) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n), n odd positive.
    a %= n;
    if (a < 0) {
        a += n;
    }
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const auto r8 = n % 8;
            if (r8 == 3 || r8 == 5) {
                result = -result;
            }
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) {
            result = -result;
        }
        a %= n;
    }
    return n == 1 ? result : 0;
}

std::string to_string(const BigInt& v)
{
    return v.get_str();
}

std::string to_string(const Rational& v)
{
    return v.get_str();
}

// ---------------------------------------------------------------- QuadNumber

QuadNumber::QuadNumber(BigInt a, BigInt b, BigInt c, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d)
{
    if (d_ < 2) {
        throw InputError("radicand must be > 1");
    }
    std::int64_t square_part = 1;
    std::int64_t core = 1;
    for (const auto& [p, e] : factorize(d_)) {
        for (int i = 0; i < e / 2; ++i) {
            square_part *= p;
        }
        if (e % 2 == 1) {
            core *= p;
        }
    }
    if (core == 1) {
        throw InputError("radicand " + std::to_string(d_) + " is a perfect square");
    }
    d_ = core;
    b_ *= square_part;
    normalize();
}

QuadNumber::QuadNumber(Trusted, BigInt a, BigInt b, BigInt c, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d)
{
    normalize();
}

QuadNumber QuadNumber::rational(const Rational& q, std::int64_t d)
{
    return QuadNumber(q.get_num(), 0, q.get_den(), d);
}

void QuadNumber::normalize()
{
    if (c_ == 0) {
        throw InputError("zero denominator");
    }
    if (c_ < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
    }
}

Rational QuadNumber::to_rational() const
{
    if (!is_rational()) {
        throw InputError("value is irrational");
    }
    Rational q(a_, c_);
    q.canonicalize();
    return q;
}

int QuadNumber::sign() const
{
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) {
        return sa;
    }
    if (sa == 0 || sa == sb) {
        return sb;
    }
    const BigInt lhs = a_ * a_;
    const BigInt rhs = b_ * b_ * d_;
    return lhs > rhs ? sa : sb;
}

BigInt QuadNumber::floor() const
{
    BigInt s;
    if (b_ == 0) {
        s = 0;
    } else {
        BigInt sq = b_ * b_ * d_;
        BigInt r;
        mpz_sqrt(r.get_mpz_t(), sq.get_mpz_t());
        s = b_ > 0 ? r : BigInt(-r - 1);
    }
    BigInt num = a_ + s;
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), c_.get_mpz_t());
    return q;
}

QuadNumber QuadNumber::conjugate() const
{
    return QuadNumber(Trusted{}, a_, -b_, c_, d_);
}

Rational QuadNumber::trace() const
{
    Rational t(2 * a_, c_);
    t.canonicalize();
    return t;
}

Rational QuadNumber::norm() const
{
    Rational n(a_ * a_ - b_ * b_ * d_, c_ * c_);
    n.canonicalize();
    return n;
}

double QuadNumber::to_double() const
{
    return (a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_))) / c_.get_d();
}

std::string QuadNumber::to_string() const
{
    if (is_rational()) {
        return to_rational().get_str();
    }
    std::ostringstream radical;
    const BigInt abs_b = abs(b_);
    if (abs_b != 1) {
        radical << abs_b.get_str() << "*";
    }
    radical << "sqrt" << d_;
    std::ostringstream os;
    if (c_ == 1) {
        if (b_ < 0) {
            os << "-";
        }
        os << radical.str();
        if (a_ > 0) {
            os << "+" << a_.get_str();
        } else if (a_ < 0) {
            os << a_.get_str();
        }
        return os.str();
    }
    os << "(";
    if (a_ != 0) {
        os << a_.get_str() << (b_ > 0 ? "+" : "-");
    } else if (b_ < 0) {
        os << "-";
    }
    os << radical.str() << ")/" << c_.get_str();
    return os.str();
}

std::int64_t QuadNumber::common_radicand(const QuadNumber& x, const QuadNumber& y)
{
    if (x.is_rational()) {
        return y.d_;
    }
    if (!y.is_rational() && x.d_ != y.d_) {
        throw InputError("values lie in different quadratic fields");
    }
    return x.d_;
}

QuadNumber operator+(const QuadNumber& x, const QuadNumber& y)
{
    const auto d = QuadNumber::common_radicand(x, y);
    return QuadNumber(QuadNumber::Trusted{}, x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_, x.c_ * y.c_, d);
}

QuadNumber operator-(const QuadNumber& x, const QuadNumber& y)
{
    return x + (-y);
}

QuadNumber QuadNumber::operator-() const
{
    QuadNumber r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

QuadNumber operator*(const QuadNumber& x, const QuadNumber& y)
{
    const auto d = QuadNumber::common_radicand(x, y);
    return QuadNumber(QuadNumber::Trusted{}, x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, x.c_ * y.c_, d);
}

QuadNumber operator/(const QuadNumber& x, const QuadNumber& y)
{
    const auto d = QuadNumber::common_radicand(x, y);
    const BigInt den = y.a_ * y.a_ - y.b_ * y.b_ * d;
    if (den == 0) {
        throw InputError("division by zero");
    }
    // x / y = x * conj(y) * c_y / (c_x * (a_y^2 - b_y^2 d))
    const BigInt a = (x.a_ * y.a_ - x.b_ * y.b_ * d) * y.c_;
    const BigInt b = (x.b_ * y.a_ - x.a_ * y.b_) * y.c_;
    return QuadNumber(QuadNumber::Trusted{}, a, b, x.c_ * den, d);
}

bool operator==(const QuadNumber& x, const QuadNumber& y)
{
    if (x.is_rational() && y.is_rational()) {
        return x.a_ == y.a_ && x.c_ == y.c_;
    }
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
}

bool operator<(const QuadNumber& x, const QuadNumber& y)
{
    if (x.is_rational() || y.is_rational() || x.d_ == y.d_) {
        return (y - x).sign() > 0;
    }
    // c_x c_y (y - x) = A + B sqrt(d_y) + C sqrt(d_x); u = A + B sqrt(d_y).
    const BigInt A = y.a_ * x.c_ - x.a_ * y.c_;
    const QuadNumber u(QuadNumber::Trusted{}, A, y.b_ * x.c_, 1, y.d_);
    const BigInt C = -x.b_ * y.c_;
    const int su = u.sign();
    const int sv = sgn(C);
    if (su == sv) {
        return su > 0;
    }
    // opposite signs: the larger absolute value wins; u^2 != C^2 d_x since
    // the radicands differ
    const QuadNumber w = u * u - QuadNumber(QuadNumber::Trusted{}, C * C * x.d_, 0, 1, y.d_);
    return (w.sign() > 0 ? su : sv) > 0;
}

// ------------------------------------------------------- continued fractions

ContinuedFraction cf_expand(const Rational& x)
{
    if (x < 0) {
        throw InputError("continued fraction input must be nonnegative");
    }
    ContinuedFraction cf;
    BigInt num = x.get_num();
    BigInt den = x.get_den();
    while (den != 0) {
        BigInt q;
        BigInt r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        cf.preperiod.push_back(q);
        num = den;
        den = r;
    }
    return cf;
}

ContinuedFraction cf_expand(const QuadNumber& x, std::size_t max_steps)
{
    if (x.is_rational()) {
        return cf_expand(x.to_rational());
    }
    if (x.sign() < 0) {
        throw InputError("continued fraction input must be positive");
    }
    // x = (P + sqrt(m)) / Q with Q | m - P^2.
    BigInt P = x.a();
    BigInt Q = x.c();
    BigInt m = x.b() * x.b() * x.radicand();
    if (x.b() < 0) {
        P = -P;
        Q = -Q;
    }
    {
        BigInt rem = m - P * P;
        if (rem % Q != 0) {
            const BigInt absQ = abs(Q);
            P *= absQ;
            m *= Q * Q;
            Q *= absQ;
        }
    }
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());

    std::vector<BigInt> quotients;
    std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
    for (std::size_t step = 0; step < max_steps; ++step) {
        auto [it, fresh] = seen.try_emplace({P, Q}, quotients.size());
        if (!fresh) {
            ContinuedFraction cf;
            cf.preperiod.assign(quotients.begin(), quotients.begin() + static_cast<long>(it->second));
            cf.period.assign(quotients.begin() + static_cast<long>(it->second), quotients.end());
            return cf;
        }
        BigInt num = Q > 0 ? BigInt(P + root) : BigInt(-P - root - 1);
        BigInt den = abs(Q);
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        quotients.push_back(q);
        P = q * Q - P;
        Q = (m - P * P) / Q;
    }
    throw SearchExhausted("continued fraction period not found", static_cast<long long>(max_steps));
}

namespace {

// Fold [q0; q1, ..., qn, tail] from the back.
QuadNumber fold(const std::vector<BigInt>& quotients, QuadNumber tail)
{
    const auto d = tail.radicand();
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
        tail = QuadNumber::rational(Rational(*it), d) + QuadNumber::rational(Rational(1), d) / tail;
    }
    return tail;
}

} // namespace

QuadNumber cf_value(const ContinuedFraction& cf, std::int64_t radicand_hint)
{
    if (cf.period.empty()) {
        if (cf.preperiod.empty()) {
            throw InputError("empty continued fraction");
        }
        Rational v(cf.preperiod.back());
        for (auto it = cf.preperiod.rbegin() + 1; it != cf.preperiod.rend(); ++it) {
            v = Rational(*it) + 1 / v;
        }
        v.canonicalize();
        return QuadNumber::rational(v, radicand_hint);
    }
    // y = [period, y] solves q_L y^2 + (q_{L-1} - p_L) y - p_{L-1} = 0.
    BigInt p_prev = 1;
    BigInt q_prev = 0;
    BigInt p = cf.period.front();
    BigInt q = 1;
    for (std::size_t i = 1; i < cf.period.size(); ++i) {
        BigInt p_next = cf.period[i] * p + p_prev;
        BigInt q_next = cf.period[i] * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    const BigInt disc = (q_prev - p) * (q_prev - p) + 4 * q * p_prev;
    // disc = s^2 * radicand; try the hint first so large periods need no
    // factoring.
    if (radicand_hint > 1 && disc % radicand_hint == 0) {
        const BigInt cofactor = disc / radicand_hint;
        if (mpz_perfect_square_p(cofactor.get_mpz_t()) != 0) {
            BigInt s;
            mpz_sqrt(s.get_mpz_t(), cofactor.get_mpz_t());
            return fold(cf.preperiod, QuadNumber(p - q_prev, s, 2 * q, radicand_hint));
        }
    }
    if (!disc.fits_slong_p()) {
        throw InputError("periodic part too large to evaluate");
    }
    QuadNumber y(p - q_prev, 1, 2 * q, disc.get_si());
    return fold(cf.preperiod, y);
}

std::string to_string(const ContinuedFraction& cf)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < cf.preperiod.size(); ++i) {
        os << (i == 0 ? "" : i == 1 ? "; " : ", ") << cf.preperiod[i].get_str();
    }
    if (!cf.period.empty()) {
        os << (cf.preperiod.empty() ? "" : cf.preperiod.size() == 1 ? "; " : ", ") << "(";
        for (std::size_t i = 0; i < cf.period.size(); ++i) {
            os << (i == 0 ? "" : ", ") << cf.period[i].get_str();
        }
        os << ")";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------- Pell

PellSolution fundamental_pell(std::int64_t disc, std::size_t max_steps)
{
    if (disc <= 0 || !is_quadratic_discriminant(disc)) {
        throw InputError("fundamental_pell needs a positive non-square discriminant = 0,1 mod 4, got " +
                         std::to_string(disc));
    }
    // omega = (r + sqrt(disc))/2 generates the order: trace r, norm (r^2 - disc)/4.
    const std::int64_t r = disc % 2;
    const BigInt trace = r;
    const BigInt norm = BigInt(r * r - disc) / 4;

    // Partial quotients of omega from the (P + sqrt(m))/Q recurrence;
    // disc - r^2 = 0 (mod 4) so Q = 2 divides m - P^2 from the start.
    BigInt P = r;
    BigInt Q = 2;
    const BigInt m = disc;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());

    BigInt p_prev = 1;
    BigInt q_prev = 0;
    BigInt p_cur = 0;
    BigInt q_cur = 1;
    bool first = true;
    for (std::size_t step = 0; step < max_steps; ++step) {
        BigInt num = Q > 0 ? BigInt(P + root) : BigInt(-P - root - 1);
        BigInt den = abs(Q);
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        P = q * Q - P;
        Q = (m - P * P) / Q;
        if (first) {
            p_prev = 1;
            q_prev = 0;
            p_cur = q;
            q_cur = 1;
            first = false;
        } else {
            BigInt p_next = q * p_cur + p_prev;
            BigInt q_next = q * q_cur + q_prev;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_next;
            q_cur = q_next;
        }
        // N(p - q*omega) = p^2 - p q trace + q^2 norm
        const BigInt n = p_cur * p_cur - p_cur * q_cur * trace + q_cur * q_cur * norm;
        if (n == 1 || n == -1) {
            PellSolution s;
            s.x = abs(BigInt(2 * p_cur - q_cur * r));
            s.y = q_cur;
            s.sign = n == 1 ? 4 : -4;
            return s;
        }
    }
    throw SearchExhausted("no unit among the scanned convergents of disc " + std::to_string(disc),
                          static_cast<long long>(max_steps));
}

} // namespace sha_predict
