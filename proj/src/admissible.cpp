#include "sqc/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sqc {

namespace {
constexpr long kSymbolicHi = 1L << 40;

long ceil_int(double x) {
    // guard against 2.0000000001 from pow/log round-off
    return static_cast<long>(std::ceil(x - 1e-9));
}
}  // namespace

AdmissibleFn AdmissibleFn::constant(long c) {
    if (c < 0) throw std::invalid_argument("constant admissible function must be >= 0");
    AdmissibleFn f;
    f.kind_ = Kind::constant;
    f.c_ = static_cast<double>(c);
    return f;
}

AdmissibleFn AdmissibleFn::logarithmic(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("log coefficient must be >= 0");
    AdmissibleFn f;
    f.kind_ = Kind::log;
    f.c_ = c;
    return f;
}

AdmissibleFn AdmissibleFn::power(double c, double gamma) {
    if (!(c >= 0.0)) throw std::invalid_argument("power coefficient must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("power exponent must lie in [0,1)");
    AdmissibleFn f;
    f.kind_ = Kind::power;
    f.c_ = c;
    f.gamma_ = gamma;
    return f;
}

AdmissibleFn AdmissibleFn::table(long lo, std::vector<long> values) {
    if (values.empty()) throw std::invalid_argument("empty table");
    for (long v : values)
        if (v < 0) throw std::invalid_argument("table values must be >= 0");
    AdmissibleFn f;
    f.kind_ = Kind::table;
    f.lo_ = lo;
    f.values_ = std::move(values);
    return f;
}

long AdmissibleFn::hi() const {
    if (kind_ == Kind::table) return lo_ + static_cast<long>(values_.size()) - 1;
    return kSymbolicHi;
}

long AdmissibleFn::operator()(long n) const {
    switch (kind_) {
    case Kind::constant:
        return static_cast<long>(c_);
    case Kind::log:
        if (n <= 0) return 0;
        return ceil_int(c_ * std::log1p(static_cast<double>(n)));
    case Kind::power:
        if (n <= 0) return gamma_ == 0.0 ? ceil_int(c_) : 0;
        return ceil_int(c_ * std::pow(static_cast<double>(n), gamma_));
    case Kind::table: {
        long i = std::clamp(n, lo_, hi()) - lo_;
        return values_[static_cast<std::size_t>(i)];
    }
    }
    return 0;
}

std::string AdmissibleFn::name() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::constant: os << static_cast<long>(c_); break;
    case Kind::log:
        if (c_ == 1.0) os << "ceil(log(1+n))";
        else os << "ceil(" << c_ << "*log(1+n))";
        break;
    case Kind::power: os << "ceil(" << c_ << "*n^" << gamma_ << ")"; break;
    case Kind::table: os << "table[" << lo_ << ".." << hi() << "]"; break;
    }
    return os.str();
}

std::string AdmissibleFn::serialize() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::constant: os << "const " << static_cast<long>(c_); break;
    case Kind::log: os << "log " << c_; break;
    case Kind::power: os << "pow " << c_ << ' ' << gamma_; break;
    case Kind::table:
        os << "table " << lo_;
        for (long v : values_) os << ' ' << v;
        break;
    }
    return os.str();
}

AdmissibleFn AdmissibleFn::parse(const std::string& text) {
    std::istringstream is(text);
    std::string kind;
    if (!(is >> kind)) throw std::invalid_argument("empty admissible function spec");
    if (kind == "const" || kind == "constant") {
        long c;
        if (!(is >> c)) throw std::invalid_argument("const needs a value: " + text);
        return constant(c);
    }
    if (kind == "log") {
        double c = 1.0;
        is >> c;
        return logarithmic(c);
    }
    if (kind == "pow" || kind == "power") {
        double c, g;
        if (!(is >> c >> g)) throw std::invalid_argument("pow needs coefficient and exponent: " + text);
        return power(c, g);
    }
    if (kind == "table") {
        long lo;
        if (!(is >> lo)) throw std::invalid_argument("table needs a start index: " + text);
        std::vector<long> vals;
        long v;
        while (is >> v) vals.push_back(v);
        return table(lo, std::move(vals));
    }
    // bare integer means a constant
    try {
        std::size_t pos = 0;
        long c = std::stol(kind, &pos);
        if (pos == kind.size()) return constant(c);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("unknown admissible function kind: " + kind);
}

FnCertificate certify(const AdmissibleFn& v, long lo, long hi) {
    FnCertificate cert;
    if (hi < lo) return cert;
    long prev = v(lo);
    for (long n = lo; n <= hi; ++n) {
        long x = v(n);
        if (x < 0) cert.nonnegative = false;
        if (n > lo && x < prev && cert.first_decrease < 0) {
            cert.monotone = false;
            cert.first_decrease = n;
        }
        prev = x;
        if (2 * n <= hi && n >= 0) {
            long y = v(2 * n);
            if (x == 0) {
                if (y > 0) cert.doubling = std::numeric_limits<double>::infinity();
            } else {
                cert.doubling = std::max(cert.doubling, static_cast<double>(y) / static_cast<double>(x));
            }
        }
    }
    // smallest n_star with v(m) <= m/2 for all m in [n_star, hi]
    long n_star = -1;
    for (long n = hi; n >= lo; --n) {
        if (2 * v(n) <= n) n_star = n;
        else break;
    }
    cert.n_star = n_star;
    return cert;
}

DotPlus compose_dotplus(const AdmissibleFn& v1, const AdmissibleFn& v2, long lo, long hi) {
    lo = std::max({lo, v1.lo(), v2.lo(), 0L});
    hi = std::min({hi, v1.hi(), v2.hi()});
    if (hi < lo) throw std::domain_error("compose_dotplus: empty common domain");
    std::vector<long> vals;
    vals.reserve(static_cast<std::size_t>(hi - lo + 1));
    double c = 1.0;
    for (long n = lo; n <= hi; ++n) {
        long a = v2(n);
        long r = a + v1(n - a);
        vals.push_back(r);
        long s = v1(n) + v2(n);
        if (s == 0 && r == 0) continue;
        if (r == 0 || s == 0) {
            c = std::numeric_limits<double>::infinity();
            continue;
        }
        double ratio = static_cast<double>(r) / static_cast<double>(s);
        c = std::max({c, ratio, 1.0 / ratio});
    }
    DotPlus out{AdmissibleFn::table(lo, std::move(vals)), c};
    auto cert = certify(out.fn, lo, hi);
    if (!cert.monotone)
        throw std::logic_error("compose_dotplus: result decreases at n=" + std::to_string(cert.first_decrease));
    if (cert.n_star < 0) throw std::logic_error("compose_dotplus: no sublinearity witness on the range");
    return out;
}

AdmissibleFn add(const AdmissibleFn& a, const AdmissibleFn& b, long lo, long hi) {
    if (hi < lo) throw std::domain_error("add: empty range");
    std::vector<long> vals;
    for (long n = lo; n <= hi; ++n) vals.push_back(a(n) + b(n));
    return AdmissibleFn::table(lo, std::move(vals));
}

}  // namespace sqc
