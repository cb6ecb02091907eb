#include "vblind/numeric.hpp"

#include "vblind/error.hpp"

#include <cmath>

namespace vblind {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::DegeneratePiece: return "DegeneratePiece";
    case ErrorCode::ScheduleSearchExhausted: return "ScheduleSearchExhausted";
    case ErrorCode::PlanInfeasible: return "PlanInfeasible";
    case ErrorCode::OrthogonalLines: return "OrthogonalLines";
    case ErrorCode::StageStarved: return "StageStarved";
    case ErrorCode::EmptyStage: return "EmptyStage";
    case ErrorCode::PieceCapExceeded: return "PieceCapExceeded";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::SlopeUndefined: return "SlopeUndefined";
    case ErrorCode::LineNotInSchedule: return "LineNotInSchedule";
    case ErrorCode::CaseRangeError: return "CaseRangeError";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SampleNotInjective: return "SampleNotInjective";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ManifestIncomplete: return "ManifestIncomplete";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    }
    return "Unknown";
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer floor_of(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Integer ceil_of(const Rational& x) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rational pow2(std::int64_t e) {
    Integer p;
    if (e >= 0) {
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        return Rational(p);
    }
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    return Rational(Integer(1), p);
}

double log2_of(const Integer& x) {
    if (x <= 0) throw Error(ErrorCode::InvalidInput, "log2 of non-positive value");
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log2(m) + static_cast<double>(e);
}

double log2_of(const Rational& x) {
    if (x <= 0) throw Error(ErrorCode::InvalidInput, "log2 of non-positive value");
    return log2_of(Integer(x.get_num())) - log2_of(Integer(x.get_den()));
}

std::string to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        return make_rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::InvalidInput, "malformed rational '" + s + "'");
    }
}

Dyadic::Dyadic(Integer mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
}

void Dyadic::normalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    auto tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), tz);
        exponent_ += static_cast<std::int64_t>(tz);
    }
}

Rational Dyadic::to_rational() const {
    return Rational(mantissa_) * pow2(exponent_);
}

double Dyadic::to_double() const {
    return std::ldexp(mantissa_.get_d(), static_cast<int>(exponent_));
}

namespace {

// Both mantissas brought to the smaller exponent.
std::pair<Integer, Integer> align(const Dyadic& a, const Dyadic& b, std::int64_t& e) {
    e = std::min(a.exponent(), b.exponent());
    Integer ma = a.mantissa();
    Integer mb = b.mantissa();
    mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exponent() - e));
    mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exponent() - e));
    return {ma, mb};
}

} // namespace

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::int64_t e = 0;
    auto [ma, mb] = align(a, b, e);
    return Dyadic(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

int compare(const Dyadic& a, const Dyadic& b) {
    int sa = sgn(a.mantissa_);
    int sb = sgn(b.mantissa_);
    if (sa != sb || sa == 0) return sa < sb ? -1 : (sa > sb ? 1 : 0);
    std::int64_t e = 0;
    auto [ma, mb] = align(a, b, e);
    int c = cmp(ma, mb);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string to_string(const Dyadic& x) {
    return x.mantissa().get_str() + "*2^" + std::to_string(x.exponent());
}

Dyadic parse_dyadic(std::string_view text) {
    std::string s(text);
    auto star = s.find("*2^");
    try {
        if (star == std::string::npos) return Dyadic(Integer(s), 0);
        return Dyadic(Integer(s.substr(0, star)), std::stoll(s.substr(star + 3)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "malformed dyadic '" + s + "'");
    }
}

Dyadic to_dyadic(const Rational& x) {
    const Integer& den = x.get_den();
    auto tz = mpz_scan1(den.get_mpz_t(), 0);
    if (mpz_sizeinbase(den.get_mpz_t(), 2) != tz + 1)
        throw Error(ErrorCode::InvalidInput, "not a dyadic rational: " + to_string(x));
    return Dyadic(Integer(x.get_num()), -static_cast<std::int64_t>(tz));
}

} // namespace vblind
