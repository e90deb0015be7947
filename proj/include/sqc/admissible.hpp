#pragma once

#include <limits>
#include <string>
#include <vector>

namespace sqc {

/// Nondecreasing, doubling, strictly sublinear integer function (an element of O+(u)).
///
/// Symbolic kinds are defined for every n >= 0. Values are rounded up to integers.
class AdmissibleFn {
public:
    enum class Kind { constant, log, power, table };

    static AdmissibleFn constant(long c);
    /// ceil(c * log(1 + n))
    static AdmissibleFn logarithmic(double c = 1.0);
    /// ceil(c * n^gamma), 0 <= gamma < 1
    static AdmissibleFn power(double c, double gamma);
    /// Explicit table on [lo, lo + values.size()).
    static AdmissibleFn table(long lo, std::vector<long> values);
    static AdmissibleFn zero() { return constant(0); }

    long operator()(long n) const;

    Kind kind() const { return kind_; }
    double coefficient() const { return c_; }
    double exponent() const { return gamma_; }
    long lo() const { return lo_; }
    long hi() const;  // inclusive upper end of the domain
    const std::vector<long>& values() const { return values_; }

    bool is_zero() const { return kind_ == Kind::constant && c_ == 0.0; }
    std::string name() const;

    /// "const 2", "log 1", "pow 1 0.5", "table 0 v0 v1 ..."
    std::string serialize() const;
    static AdmissibleFn parse(const std::string& text);

private:
    Kind kind_ = Kind::constant;
    double c_ = 0.0;
    double gamma_ = 0.0;
    long lo_ = 0;
    std::vector<long> values_;
};

/// Invariant certificate of a function over a finite range.
struct FnCertificate {
    bool nonnegative = true;
    bool monotone = true;
    double doubling = 0.0;  // max v(2r)/v(r), infinity if v(r)=0<v(2r)
    long n_star = -1;       // v(n) <= n/2 for all tabulated n >= n_star; -1 if none
    long first_decrease = -1;
    bool ok() const { return nonnegative && monotone && n_star >= 0; }
};

FnCertificate certify(const AdmissibleFn& v, long lo, long hi);

struct DotPlus {
    AdmissibleFn fn;
    double comparability = 1.0;  // C with C^-1 (v1+v2) <= v1 (+) v2 <= C (v1+v2)
};

/// (v1 (+) v2)(n) = v2(n) + v1(n - v2(n)), tabulated on [lo, hi].
/// Throws std::domain_error on an empty range and std::logic_error on an invariant violation.
DotPlus compose_dotplus(const AdmissibleFn& v1, const AdmissibleFn& v2, long lo, long hi);

/// Pointwise sum tabulated on [lo, hi].
AdmissibleFn add(const AdmissibleFn& a, const AdmissibleFn& b, long lo, long hi);

}  // namespace sqc
