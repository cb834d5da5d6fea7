#include "fes/spin_chain.hpp"

#include "fes/errors.hpp"

namespace fes {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cxd(0, -1), cxd(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix identity2() { return Matrix::Identity(2, 2); }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

namespace {

void check_hermitian(const std::string& name, const Matrix& h2) {
    const double drift = (h2 - h2.adjoint()).cwiseAbs().maxCoeff();
    if (drift > 1e-14)
        throw NonHermitianHamiltonian("model '" + name + "': two-site density deviates from Hermitian by " +
                                      std::to_string(drift));
}

}  // namespace

SpinChainModel ising_model(double J, double h) {
    SpinChainModel model;
    model.name = "ising";
    model.d = 2;
    model.params = {{"J", J}, {"h", h}};
    const Matrix sx = pauli_x();
    const Matrix sz = pauli_z();
    const Matrix id = identity2();
    model.h2 = -J * kron(sx, sx) + 0.5 * h * (kron(sz, id) + kron(id, sz));
    check_hermitian(model.name, model.h2);
    return model;
}

SpinChainModel make_model(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "ising") return ising_model(get("J", 1.0), get("h", 1.0));
    throw ConfigError("unknown model '" + name + "' (available: ising)");
}

}  // namespace fes
