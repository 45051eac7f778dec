#include "weilkit/weil_morphism.hpp"

#include <map>
#include <set>

namespace weilkit {

namespace {

QVector basis_product(const WeilAlgebra &a, std::size_t i, std::size_t j) {
    QVector out(a.dimension());
    for (const auto &e : a.product(i, j))
        out[e.index] += e.coeff;
    return out;
}

QVector multiply(const WeilAlgebra &a, const QVector &x, const QVector &y) {
    const std::size_t n = a.dimension();
    QVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(x[i]) == 0)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(y[j]) == 0)
                continue;
            for (const auto &e : a.product(i, j))
                out[e.index] += e.coeff * x[i] * y[j];
        }
    }
    return out;
}

std::string fresh_name(const std::string &name, const std::set<std::string> &used) {
    if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'z') {
        for (int step = 1; step < 26; ++step) {
            std::string cand(1, static_cast<char>('a' + (name[0] - 'a' + step) % 26));
            if (!used.count(cand))
                return cand;
        }
    }
    for (int suffix = 2;; ++suffix) {
        std::string cand = name + "_" + std::to_string(suffix);
        if (!used.count(cand))
            return cand;
    }
}

WeilAlgebra with_tensor_info(const WeilAlgebra &built, const WeilAlgebra &w1, const WeilAlgebra &w2,
                             std::vector<std::pair<std::size_t, std::size_t>> pairs,
                             std::string label) {
    auto impl = std::make_shared<WeilAlgebraImpl>(*built.impl());
    TensorInfo info;
    info.left = w1.impl();
    info.right = w2.impl();
    info.index_of_pair.assign(w1.dimension() * w2.dimension(), 0);
    for (std::size_t t = 0; t < pairs.size(); ++t)
        info.index_of_pair[pairs[t].first * w2.dimension() + pairs[t].second] = t;
    info.pairs = std::move(pairs);
    impl->tensor = std::move(info);
    if (!label.empty())
        impl->label = std::move(label);
    return WeilAlgebra(std::move(impl));
}

} // namespace

WeilMorphism WeilMorphism::from_matrix(WeilAlgebra source, WeilAlgebra target, QMatrix matrix) {
    WeilMorphism m(std::move(source), std::move(target), std::move(matrix));
    m.validate();
    return m;
}

WeilMorphism WeilMorphism::trusted(WeilAlgebra source, WeilAlgebra target, QMatrix matrix) {
    if (matrix.rows() != target.dimension() || matrix.cols() != source.dimension())
        throw WeilError("morphism matrix has wrong shape");
    return WeilMorphism(std::move(source), std::move(target), std::move(matrix));
}

WeilMorphism WeilMorphism::from_generator_images(WeilAlgebra source, WeilAlgebra target,
                                                 const std::vector<WeilElement> &images) {
    if (!source.is_presented())
        throw WeilError("generator images require a presented source algebra");
    const auto &gens = source.generators();
    if (images.size() != gens.size())
        throw WeilError("expected " + std::to_string(gens.size()) + " generator images, got " +
                        std::to_string(images.size()));
    for (std::size_t g = 0; g < images.size(); ++g) {
        if (images[g].algebra() != target)
            throw WeilError("image of generator '" + gens[g] + "' lies in the wrong algebra");
        if (images[g].mode() != ScalarMode::ExactRational)
            throw ModeError("generator images must be exact");
        if (!images[g].augmentation().is_zero())
            throw WeilError("image of generator '" + gens[g] +
                            "' has nonzero augmentation; morphisms must preserve the maximal ideal");
    }
    auto monomial_image = [&](const Exponents &e) {
        WeilElement v = WeilElement::constant(target, Scalar(Rational(1)));
        for (std::size_t g = 0; g < e.size(); ++g)
            if (e[g] > 0)
                v = v * images[g].pow(e[g]);
        return v;
    };
    for (const auto &r : source.relations())
        if (monomial_image(r) != WeilElement::zero(target))
            throw WeilError("generator images do not kill a relation of the source");
    QMatrix m(target.dimension(), source.dimension());
    for (std::size_t c = 0; c < source.dimension(); ++c)
        m.set_column(c, monomial_image(source.monomials()[c]).to_rational());
    return from_matrix(std::move(source), std::move(target), std::move(m));
}

WeilMorphism WeilMorphism::identity(const WeilAlgebra &a) {
    return WeilMorphism(a, a, identity_matrix(a.dimension()));
}

void WeilMorphism::validate() const {
    const std::size_t ns = source_.dimension(), nt = target_.dimension();
    if (matrix_.rows() != nt || matrix_.cols() != ns)
        throw WeilError("morphism matrix has wrong shape");
    for (std::size_t r = 0; r < nt; ++r)
        if (matrix_(r, 0) != (r == 0 ? 1 : 0))
            throw WeilError("morphism does not send 1 to 1");
    const auto &aug_s = source_.augmentation();
    const auto &aug_t = target_.augmentation();
    for (std::size_t c = 0; c < ns; ++c) {
        Rational v = 0;
        for (std::size_t r = 0; r < nt; ++r)
            v += aug_t[r] * matrix_(r, c);
        if (v != aug_s[c])
            throw WeilError("morphism is not compatible with the augmentations");
    }
    std::vector<QVector> images;
    for (std::size_t c = 0; c < ns; ++c)
        images.push_back(matrix_.column(c));
    for (std::size_t i = 1; i < ns; ++i)
        for (std::size_t j = i; j < ns; ++j) {
            QVector lhs = matrix_ * basis_product(source_, i, j);
            if (lhs != multiply(target_, images[i], images[j]))
                throw WeilError("morphism is not multiplicative on basis pair (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
        }
}

WeilElement WeilMorphism::apply(const WeilElement &w) const {
    if (w.algebra() != source_)
        throw WeilError("element does not belong to the morphism's source");
    ScalarMode mode = w.mode();
    Vector out(target_.dimension(), Scalar::zero(mode));
    for (std::size_t r = 0; r < matrix_.rows(); ++r)
        for (std::size_t c = 0; c < matrix_.cols(); ++c)
            if (sgn(matrix_(r, c)) != 0 && !w[c].is_zero())
                out[r] += Scalar::from_rational(matrix_(r, c), mode) * w[c];
    return WeilElement(target_, std::move(out));
}

QVector WeilMorphism::apply(const QVector &coeffs) const { return matrix_ * coeffs; }

bool WeilMorphism::is_isomorphism() const {
    return matrix_.rows() == matrix_.cols() && rank(matrix_) == matrix_.rows();
}

bool operator==(const WeilMorphism &a, const WeilMorphism &b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
}

WeilMorphism augmentation(const WeilAlgebra &w) {
    QMatrix m(1, w.dimension());
    for (std::size_t c = 0; c < w.dimension(); ++c)
        m(0, c) = w.augmentation()[c];
    return WeilMorphism::trusted(w, WeilAlgebra::k(), std::move(m));
}

WeilMorphism unit_map(const WeilAlgebra &w) {
    QMatrix m(w.dimension(), 1);
    m(0, 0) = 1;
    return WeilMorphism::trusted(WeilAlgebra::k(), w, std::move(m));
}

WeilMorphism compose(const WeilMorphism &psi, const WeilMorphism &phi) {
    if (phi.target() != psi.source())
        throw WeilError("cannot compose: target of the first morphism (" + phi.target().describe() +
                        ") differs from source of the second (" + psi.source().describe() + ")");
    return WeilMorphism::trusted(phi.source(), psi.target(), psi.matrix() * phi.matrix());
}

TensorProduct tensor(const WeilAlgebra &w1, const WeilAlgebra &w2) {
    const std::size_t n1 = w1.dimension(), n2 = w2.dimension();
    WeilAlgebra built = WeilAlgebra::k();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::string label;
    if (w1.is_presented() && w2.is_presented()) {
        std::vector<std::string> gens = w1.generators();
        std::set<std::string> used(gens.begin(), gens.end());
        used.insert(w2.generators().begin(), w2.generators().end());
        std::set<std::string> left_names(gens.begin(), gens.end());
        for (const auto &name : w2.generators()) {
            std::string chosen = name;
            if (left_names.count(name)) {
                chosen = fresh_name(name, used);
                used.insert(chosen);
            }
            gens.push_back(chosen);
        }
        const std::size_t g1 = w1.generators().size(), g2 = w2.generators().size();
        std::vector<Exponents> rels;
        for (const auto &r : w1.relations()) {
            Exponents e(r);
            e.resize(g1 + g2, 0);
            rels.push_back(std::move(e));
        }
        for (const auto &r : w2.relations()) {
            Exponents e(g1, 0);
            e.insert(e.end(), r.begin(), r.end());
            rels.push_back(std::move(e));
        }
        built = WeilAlgebra::presented(std::move(gens), std::move(rels));
        std::map<Exponents, std::size_t> idx1, idx2;
        for (std::size_t i = 0; i < n1; ++i)
            idx1.emplace(w1.monomials()[i], i);
        for (std::size_t j = 0; j < n2; ++j)
            idx2.emplace(w2.monomials()[j], j);
        for (const auto &m : built.monomials()) {
            Exponents l(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(g1));
            Exponents r(m.begin() + static_cast<std::ptrdiff_t>(g1), m.end());
            pairs.emplace_back(idx1.at(l), idx2.at(r));
        }
    } else {
        TabledData data;
        data.dimension = n1 * n2;
        data.augmentation.resize(n1 * n2);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                pairs.emplace_back(i, j);
                data.augmentation[i * n2 + j] = w1.augmentation()[i] * w2.augmentation()[j];
            }
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t a = 0; a < n1; ++a)
                    for (std::size_t b = 0; b < n2; ++b)
                        for (const auto &e1 : w1.product(i, a))
                            for (const auto &e2 : w2.product(j, b))
                                data.constants.push_back({i * n2 + j, a * n2 + b,
                                                          e1.index * n2 + e2.index,
                                                          e1.coeff * e2.coeff});
        built = WeilAlgebra::tabled(data);
        label = "(" + w1.describe() + ") (x) (" + w2.describe() + ")";
    }
    WeilAlgebra result = with_tensor_info(built, w1, w2, std::move(pairs), std::move(label));
    const auto &info = *result.tensor_info();
    QMatrix left(result.dimension(), n1), right(result.dimension(), n2);
    for (std::size_t i = 0; i < n1; ++i)
        left(info.index_of_pair[i * n2], i) = 1;
    for (std::size_t j = 0; j < n2; ++j)
        right(info.index_of_pair[j], j) = 1;
    return {result, WeilMorphism::trusted(w1, result, std::move(left)),
            WeilMorphism::trusted(w2, result, std::move(right))};
}

WeilMorphism tensor_morphism(const WeilMorphism &phi1, const WeilMorphism &phi2,
                             const WeilAlgebra &source_tensor, const WeilAlgebra &target_tensor) {
    const auto *si = source_tensor.tensor_info();
    const auto *ti = target_tensor.tensor_info();
    if (!si || !ti)
        throw WeilError("tensor_morphism needs algebras built by tensor()");
    if (source_tensor.tensor_left() != phi1.source() || source_tensor.tensor_right() != phi2.source() ||
        target_tensor.tensor_left() != phi1.target() || target_tensor.tensor_right() != phi2.target())
        throw WeilError("tensor factors do not match the morphism endpoints");
    const std::size_t t2 = phi2.target().dimension();
    QMatrix m(target_tensor.dimension(), source_tensor.dimension());
    for (std::size_t c = 0; c < si->pairs.size(); ++c) {
        auto [i, j] = si->pairs[c];
        for (std::size_t k = 0; k < phi1.target().dimension(); ++k) {
            if (sgn(phi1.matrix()(k, i)) == 0)
                continue;
            for (std::size_t l = 0; l < t2; ++l)
                if (sgn(phi2.matrix()(l, j)) != 0)
                    m(ti->index_of_pair[k * t2 + l], c) = phi1.matrix()(k, i) * phi2.matrix()(l, j);
        }
    }
    return WeilMorphism::trusted(source_tensor, target_tensor, std::move(m));
}

WeilMorphism associator(const WeilAlgebra &left_nested, const WeilAlgebra &right_nested) {
    const auto *outer_l = left_nested.tensor_info();
    const auto *outer_r = right_nested.tensor_info();
    if (!outer_l || !outer_r)
        throw WeilError("associator needs nested tensor algebras");
    WeilAlgebra ab = left_nested.tensor_left();
    WeilAlgebra bc = right_nested.tensor_right();
    const auto *inner_l = ab.tensor_info();
    const auto *inner_r = bc.tensor_info();
    if (!inner_l || !inner_r)
        throw WeilError("associator needs nested tensor algebras");
    if (ab.tensor_left() != right_nested.tensor_left() || ab.tensor_right() != bc.tensor_left() ||
        left_nested.tensor_right() != bc.tensor_right())
        throw WeilError("associator factors do not match");
    const std::size_t nc = left_nested.tensor_right().dimension();
    const std::size_t nbc = bc.dimension();
    QMatrix m(right_nested.dimension(), left_nested.dimension());
    for (std::size_t t = 0; t < outer_l->pairs.size(); ++t) {
        auto [ab_index, c] = outer_l->pairs[t];
        auto [a, b] = inner_l->pairs[ab_index];
        std::size_t bc_index = inner_r->index_of_pair[b * nc + c];
        m(outer_r->index_of_pair[a * nbc + bc_index], t) = 1;
    }
    return WeilMorphism::trusted(left_nested, right_nested, std::move(m));
}

WeilMorphism symmetry(const WeilAlgebra &ab, const WeilAlgebra &ba) {
    const auto *i1 = ab.tensor_info();
    const auto *i2 = ba.tensor_info();
    if (!i1 || !i2 || ab.tensor_left() != ba.tensor_right() || ab.tensor_right() != ba.tensor_left())
        throw WeilError("symmetry needs A (x) B and B (x) A built by tensor()");
    const std::size_t na = ab.tensor_left().dimension();
    QMatrix m(ba.dimension(), ab.dimension());
    for (std::size_t t = 0; t < i1->pairs.size(); ++t) {
        auto [a, b] = i1->pairs[t];
        m(i2->index_of_pair[b * na + a], t) = 1;
    }
    return WeilMorphism::trusted(ab, ba, std::move(m));
}

} // namespace weilkit
