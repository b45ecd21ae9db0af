#pragma once

#include <minop/linalg.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace minop {

/// Degree convention of a whole computation: cochain differentials raise
/// degree by one, chain differentials lower it. Mixing conventions inside
/// one computation is an error.
enum class Convention { Cochain, Chain };

inline int delta(Convention c) { return c == Convention::Cochain ? 1 : -1; }

inline std::string convention_name(Convention c) {
    return c == Convention::Cochain ? "cochain" : "chain";
}

/*
 * Finitely supported graded vector space with a declared degree window.
 * Degrees inside the window have explicit (possibly empty) ordered bases;
 * queries outside the window are hard errors, never implicit zeros, so
 * truncation bugs surface at the query site.
 */
class GradedSpace {
public:
    GradedSpace() : lo_(0), hi_(-1) {}
    GradedSpace(int lo, int hi) : lo_(lo), hi_(hi) {
        if (lo > hi) throw Error("degree window is empty");
    }

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool in_window(int k) const { return lo_ <= k && k <= hi_; }

    void require(int k) const {
        if (!in_window(k))
            throw WindowError("degree " + std::to_string(k) + " outside window [" +
                              std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }

    void set_basis(int k, std::vector<std::string> labels) {
        require(k);
        if (labels.empty())
            basis_.erase(k);
        else
            basis_[k] = std::move(labels);
    }

    int dim(int k) const {
        require(k);
        auto it = basis_.find(k);
        return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
    }

    const std::vector<std::string>& labels(int k) const {
        static const std::vector<std::string> empty;
        require(k);
        auto it = basis_.find(k);
        return it == basis_.end() ? empty : it->second;
    }

    /// Degrees with nonzero dimension, ascending.
    std::vector<int> support() const {
        std::vector<int> out;
        for (const auto& [k, b] : basis_)
            if (!b.empty()) out.push_back(k);
        return out;
    }

private:
    int lo_, hi_;
    std::map<int, std::vector<std::string>> basis_;
};

/*
 * A (co)chain complex over the rationals: a graded space plus one exact
 * matrix per degree. d_k maps degree k to degree k + delta. d after d = 0 is
 * checked at construction for every degree where both factors live in the
 * window.
 */
class ChainComplex {
public:
    ChainComplex() = default;
    ChainComplex(GradedSpace space, Convention conv, std::map<int, RatMatrix> diffs)
        : space_(std::move(space)), conv_(conv), d_(std::move(diffs)) {
        int dl = delta(conv_);
        for (int k = space_.lo(); k <= space_.hi(); ++k) {
            if (!space_.in_window(k + dl)) continue;
            auto it = d_.find(k);
            if (it == d_.end()) continue;  // absent entry = zero map
            if (it->second.rows() != space_.dim(k + dl) ||
                it->second.cols() != space_.dim(k))
                throw ValidationError("differential shape mismatch at degree " +
                                      std::to_string(k));
        }
        for (int k = space_.lo(); k <= space_.hi(); ++k) {
            if (!space_.in_window(k + dl) || !space_.in_window(k + 2 * dl)) continue;
            RatMatrix dd = d(k + dl).mul(d(k));
            if (!dd.is_zero())
                throw ValidationError("d^2 != 0 at degree " + std::to_string(k));
        }
    }

    Convention convention() const { return conv_; }
    const GradedSpace& space() const { return space_; }
    int dim(int k) const { return space_.dim(k); }

    /// Matrix of d from degree k to degree k, requires both in window.
    RatMatrix d(int k) const {
        space_.require(k);
        space_.require(k + delta(conv_));
        auto it = d_.find(k);
        if (it != d_.end()) return it->second;
        return RatMatrix(space_.dim(k + delta(conv_)), space_.dim(k));
    }

private:
    GradedSpace space_;
    Convention conv_ = Convention::Cochain;
    std::map<int, RatMatrix> d_;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

/*
 * Degreewise linear map between complexes of equal convention; validated to
 * commute with the differentials on the common window.
 */
class ComplexMap {
public:
    ComplexMap(ComplexPtr src, ComplexPtr dst, std::map<int, RatMatrix> maps)
        : src_(std::move(src)), dst_(std::move(dst)), maps_(std::move(maps)) {
        if (src_->convention() != dst_->convention())
            throw ValidationError("chain map across conventions");
        int dl = delta(src_->convention());
        int lo = std::max(src_->space().lo(), dst_->space().lo());
        int hi = std::min(src_->space().hi(), dst_->space().hi());
        for (int k = lo; k <= hi; ++k) {
            const RatMatrix m = at(k);
            if (m.rows() != dst_->dim(k) || m.cols() != src_->dim(k))
                throw ValidationError("chain map shape mismatch at degree " +
                                      std::to_string(k));
        }
        for (int k = lo; k <= hi; ++k) {
            if (k + dl < lo || k + dl > hi) continue;
            RatMatrix lhs = dst_->d(k).mul(at(k));
            RatMatrix rhs = at(k + dl).mul(src_->d(k));
            if (lhs != rhs)
                throw ValidationError("not a chain map at degree " + std::to_string(k));
        }
    }

    const ComplexPtr& src() const { return src_; }
    const ComplexPtr& dst() const { return dst_; }

    RatMatrix at(int k) const {
        auto it = maps_.find(k);
        if (it != maps_.end()) return it->second;
        return RatMatrix(dst_->dim(k), src_->dim(k));
    }

private:
    ComplexPtr src_, dst_;
    std::map<int, RatMatrix> maps_;
};

/*
 * Cohomology of one degree with explicit canonical data:
 *   representatives  cocycles spanning H, one per basis class
 *   section          H -> degree-k chains (image inside the cocycles)
 *   classifier       cocycles -> H coordinates, classifier * section = id
 */
struct CohomologyResult {
    int degree = 0;
    int dimension = 0;
    std::vector<RatVec> representatives;
    RatMatrix section;     // dim(k) x h
    RatMatrix classifier;  // h x dim(k), valid on cocycles
};

inline CohomologyResult cohomology(const ChainComplex& c, int k,
                                   std::mt19937_64* rng = nullptr) {
    int dl = delta(c.convention());
    c.space().require(k - dl);
    c.space().require(k);
    c.space().require(k + dl);

    SubspaceBasis cycles = kernel(c.d(k));
    RatMatrix dprev = c.d(k - dl);
    std::vector<RatVec> boundary_coords;
    for (int j = 0; j < dprev.cols(); ++j) {
        RatVec b = dprev.column_dense(j);
        if (!cycles.contains(b))
            throw ValidationError("boundary is not a cycle at degree " +
                                  std::to_string(k));
        boundary_coords.push_back(cycles.coords(b));
    }
    SubspaceBasis bsub = SubspaceBasis::from_vectors(cycles.dim(), boundary_coords);
    QuotientSection qs = rng ? quotient_section_random(cycles.dim(), bsub, *rng)
                             : quotient_section(cycles.dim(), bsub);

    CohomologyResult out;
    out.degree = k;
    out.dimension = qs.projection.rows();

    // Z coordinates -> ambient chains.
    RatMatrix zmat_t = cycles.basis.transpose();
    out.section = zmat_t.mul(qs.section);

    // ambient cocycle -> Z coordinates (selection of pivot entries).
    RatMatrix coord_z(cycles.dim(), c.dim(k));
    for (int i = 0; i < cycles.dim(); ++i) coord_z.set(i, cycles.pivots[i], Rat(1));
    out.classifier = qs.projection.mul(coord_z);

    for (int j = 0; j < out.dimension; ++j)
        out.representatives.push_back(out.section.column_dense(j));
    return out;
}

/*
 * Mapping cone of f : A -> B. In the cochain convention C(f)^n = A^{n+1} + B^n
 * with d(a,b) = (-da, -fa + db); in the chain convention C(f)_n = A_{n-1} + B_n
 * with d(a,b) = (-da, db - f a). The A block comes first in coordinates.
 */
struct Cone {
    ComplexPtr complex;
    ComplexPtr a_side, b_side;
    Convention conv = Convention::Cochain;

    /// Degree of the A block inside cone degree n.
    int a_degree(int n) const { return conv == Convention::Cochain ? n + 1 : n - 1; }
    int a_dim(int n) const { return a_side->dim(a_degree(n)); }
    int b_dim(int n) const { return b_side->dim(n); }

    std::pair<RatVec, RatVec> split(int n, const RatVec& v) const {
        RatVec a(v.begin(), v.begin() + a_dim(n));
        RatVec b(v.begin() + a_dim(n), v.end());
        return {std::move(a), std::move(b)};
    }

    RatVec combine(const RatVec& a, const RatVec& b) const {
        RatVec v = a;
        v.insert(v.end(), b.begin(), b.end());
        return v;
    }
};

inline Cone cone(const ComplexMap& f) {
    ComplexPtr A = f.src(), B = f.dst();
    Convention conv = A->convention();
    int dl = delta(conv);

    int lo, hi;
    if (conv == Convention::Cochain) {
        lo = std::max(B->space().lo(), A->space().lo() - 1);
        hi = std::min(B->space().hi(), A->space().hi() - 1);
    } else {
        lo = std::max(B->space().lo(), A->space().lo() + 1);
        hi = std::min(B->space().hi(), A->space().hi() + 1);
    }
    if (lo > hi) throw WindowError("cone window is empty");

    auto adeg = [&](int n) { return conv == Convention::Cochain ? n + 1 : n - 1; };

    GradedSpace space(lo, hi);
    for (int n = lo; n <= hi; ++n) {
        std::vector<std::string> labels;
        for (const auto& l : A->space().labels(adeg(n))) labels.push_back("a:" + l);
        for (const auto& l : B->space().labels(n)) labels.push_back("b:" + l);
        space.set_basis(n, std::move(labels));
    }

    std::map<int, RatMatrix> d;
    for (int n = lo; n <= hi; ++n) {
        if (n + dl < lo || n + dl > hi) continue;
        int da = A->dim(adeg(n)), db = B->dim(n);
        int ra = A->dim(adeg(n + dl)), rb = B->dim(n + dl);
        RatMatrix m(ra + rb, da + db);
        RatMatrix dA = A->d(adeg(n));
        for (int i = 0; i < dA.rows(); ++i)
            for (const auto& [c, v] : dA.row(i)) m.set(i, c, -v);
        RatMatrix fa = f.at(adeg(n));
        for (int i = 0; i < fa.rows(); ++i)
            for (const auto& [c, v] : fa.row(i)) m.set(ra + i, c, -v);
        RatMatrix dB = B->d(n);
        for (int i = 0; i < dB.rows(); ++i)
            for (const auto& [c, v] : dB.row(i)) m.set(ra + i, da + c, v);
        d.emplace(n, std::move(m));
    }

    Cone out;
    out.complex = std::make_shared<ChainComplex>(space, conv, std::move(d));
    out.a_side = A;
    out.b_side = B;
    out.conv = conv;
    return out;
}

}  // namespace minop
