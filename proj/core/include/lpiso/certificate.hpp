#pragma once

#include "lpiso/node.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/witness.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lpiso {

/// Evidence that a map on an orchard has success index at least `level`:
/// each of the first `level` generators is within 2^-level of the span (with
/// explicit coefficients) and every summativity defect is below 2^-level.
///
/// In step form the map values and the generators are stored as step
/// functions, so the certificate can be re-checked from its serialised form
/// alone. In vector form (oracle presentations) they are rational vectors
/// over the presentation and re-checking needs its norm oracle.
struct SuccessCertificate {
    Exponent p{Rational(1)};
    long level = 0;
    bool vector_form = false;

    NodeMap values;                                 // step form
    std::vector<StepFn> targets;                    // step form: R(j), j < level
    std::map<Node, RationalVector> vectors;         // vector form
    std::vector<std::size_t> target_indices;        // generator index of each target

    std::vector<std::map<Node, ComplexRational>> betas;
    std::vector<Interval> residuals;
    std::map<Node, Interval> defects;
};

/// Summativity defect psi(nu) - sum of children.
StepFn summativity_defect(const NodeMap& psi, const Node& nu);

std::optional<SuccessCertificate> success_certify(const Presentation& P, const NodeMap& psi, long N,
                                                  const WitnessOptions& opt = {});
std::optional<SuccessCertificate> success_certify(const Presentation& P,
                                                  const std::map<Node, RationalVector>& psi,
                                                  long N, const WitnessOptions& opt = {});

struct CertificateCheck {
    bool ok = false;
    std::string reason;  // first failure
};

/// Recomputes every bound from the certificate's own data.
CertificateCheck verify_certificate(const SuccessCertificate& cert);
/// Also checks the targets against P's generators; required for vector form.
CertificateCheck verify_certificate(const SuccessCertificate& cert, const Presentation& P);

/// Largest N <= n_max with a certificate found (success at N + 1 implies
/// success at N, so the scan stops at the first failure). Level -1 when
/// not even level 0 certifies.
std::pair<long, SuccessCertificate> certified_level(const Presentation& P, const NodeMap& psi,
                                                    long n_max, const WitnessOptions& opt = {});

}  // namespace lpiso
