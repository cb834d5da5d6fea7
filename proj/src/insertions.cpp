#include "fes/insertions.hpp"

#include "fes/errors.hpp"
#include "fes/spin_chain.hpp"

namespace fes {

namespace {

long long binomial(int n, int k) {
    long long acc = 1;
    for (int i = 0; i < k; ++i) acc = acc * (n - i) / (i + 1);
    return acc;
}

Matrix identity_power(int d, int sites) {
    Eigen::Index dim = 1;
    for (int i = 0; i < sites; ++i) dim *= d;
    return Matrix::Identity(dim, dim);
}

} // namespace

OperatorInsertion discrete_derivative(const OperatorInsertion& base, int level) {
    if (level < 1 || level > 3)
        throw UnsupportedLevel("discrete derivative level " + std::to_string(level) +
                               " outside the supported range 1..3");
    if (base.is_string() || base.kind == InsertionKind::DiscreteDerivative)
        throw UnsupportedLevel("discrete derivative needs an onsite or two-site base, got kind " +
                               insertion_kind_name(base.kind));
    // Recover the physical dimension from the block shape: rows = phys^footprint.
    int phys = 0;
    for (int cand = 2; cand <= 8; ++cand) {
        Eigen::Index p = 1;
        for (int i = 0; i < base.footprint; ++i) p *= cand;
        if (p == base.block.rows()) {
            phys = cand;
            break;
        }
    }
    if (phys < 2) throw UnsupportedLevel("derivative base block shape is not a power of its footprint");

    OperatorInsertion out;
    out.label = "d" + std::string(level > 1 ? std::to_string(level) : "") + base.label;
    out.kind = InsertionKind::DiscreteDerivative;
    out.base_kind = base.kind;
    out.level = level;
    out.footprint = base.footprint + level;
    out.connected = false;  // the difference of a translation-invariant one-point value is zero
    Eigen::Index dim = 1;
    for (int i = 0; i < out.footprint; ++i) dim *= phys;
    out.block = Matrix::Zero(dim, dim);
    for (int j = 0; j <= level; ++j) {
        const double coeff = ((level - j) % 2 == 0 ? 1.0 : -1.0) *
                             static_cast<double>(binomial(level, j));
        Matrix term = kron(identity_power(phys, j), kron(base.block, identity_power(phys, level - j)));
        out.block += coeff * term;
    }
    return out;
}

OperatorInsertion named_insertion(const std::string& label) {
    int level = 0;
    std::string core = label;
    if (label.size() > 1 && label[0] == 'd') {
        if (label[1] == '2' || label[1] == '3') {
            level = label[1] - '0';
            core = label.substr(2);
        } else {
            level = 1;
            core = label.substr(1);
        }
    }

    OperatorInsertion base;
    if (core == "sigma") {
        base.label = "sigma";
        base.kind = InsertionKind::Onsite;
        base.block = pauli_x();
        base.footprint = 1;
        base.connected = false;
    } else if (core == "eps") {
        base.label = "eps";
        base.kind = InsertionKind::TwoSite;
        // The energy-density primary is the duality-odd combination of the
        // bond and field terms. With our +J coupling the relative sign is +;
        // with sx sx - sz the epsilon content cancels and the correlator
        // decays two powers too fast (checked against ring ED).
        base.block = kron(pauli_x(), pauli_x()) + kron(pauli_z(), identity2());
        base.footprint = 2;
        base.connected = true;
    } else if (core == "mu" && level == 0) {
        base.label = "mu";
        base.kind = InsertionKind::StringZ;
        base.endpoint = identity2();
        base.footprint = 1;
        base.connected = false;
    } else if (core == "psi" && level == 0) {
        base.label = "psi";
        base.kind = InsertionKind::StringZPlus;
        base.endpoint = 0.5 * (pauli_x() + cxd(0.0, 1.0) * pauli_y());
        base.footprint = 1;
        base.connected = false;
    } else if (core == "psibar" && level == 0) {
        base.label = "psibar";
        base.kind = InsertionKind::StringZMinus;
        base.endpoint = 0.5 * (pauli_x() - cxd(0.0, 1.0) * pauli_y());
        base.footprint = 1;
        base.connected = false;
    } else {
        throw ConfigError("unknown operator label '" + label +
                          "' (available: sigma, eps, mu, psi, psibar and d/d2/d3 "
                          "derivatives of sigma and eps)");
    }
    if (level == 0) return base;
    return discrete_derivative(base, level);
}

std::string insertion_kind_name(InsertionKind kind) {
    switch (kind) {
        case InsertionKind::Onsite: return "onsite";
        case InsertionKind::TwoSite: return "two_site";
        case InsertionKind::StringZ: return "string_z";
        case InsertionKind::StringZPlus: return "string_z_plus";
        case InsertionKind::StringZMinus: return "string_z_minus";
        case InsertionKind::DiscreteDerivative: return "discrete_derivative";
    }
    return "unknown";
}

} // namespace fes
