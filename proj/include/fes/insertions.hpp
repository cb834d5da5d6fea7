#pragma once

#include <string>

#include "fes/linalg.hpp"

namespace fes {

enum class InsertionKind {
    Onsite,
    TwoSite,
    StringZ,
    StringZPlus,
    StringZMinus,
    DiscreteDerivative,
};

// One operator to be inserted into a two-point function. Local kinds carry a
// d^footprint square block (site 1 on the most significant digit). String
// kinds carry a d x d endpoint factor; between the endpoints the walker uses
// the sigma-z dressed transfer operator instead of plain E.
struct OperatorInsertion {
    std::string label;
    InsertionKind kind = InsertionKind::Onsite;
    InsertionKind base_kind = InsertionKind::Onsite;  // for derivatives
    int level = 0;                                    // finite-difference order
    Matrix block;                                     // local kinds and derivatives
    Matrix endpoint;                                  // string kinds
    int footprint = 1;
    bool connected = true;

    bool is_string() const {
        return kind == InsertionKind::StringZ || kind == InsertionKind::StringZPlus ||
               kind == InsertionKind::StringZMinus;
    }
};

// Level-n forward difference of a local insertion: the block becomes
// sum_j (-1)^(n-j) C(n,j) I^j (x) B (x) I^(n-j) on footprint + n sites, so the
// correlator of the result is the n-th difference of the base correlator in
// each argument. Levels 1..3; string bases are rejected.
OperatorInsertion discrete_derivative(const OperatorInsertion& base, int level);

// Spin-1/2 chain operator table. Plain labels: sigma (sigma-x, unconnected by
// default), eps (sigma-x sigma-x + sigma-z, connected), mu (sigma-z string),
// psi / psibar (sigma-z string with sigma+ / sigma- endpoints). Derivative
// labels prepend d, d2 or d3 to a local label: dsigma, d2sigma, d3sigma, deps.
OperatorInsertion named_insertion(const std::string& label);

std::string insertion_kind_name(InsertionKind kind);

} // namespace fes
