#include "lpiso/certificate.hpp"

namespace lpiso {

namespace {

std::size_t target_count(const Presentation& P, long N) {
    std::size_t n = static_cast<std::size_t>(N);
    if (P.size()) {
        n = std::min(n, *P.size());
    }
    return n;
}

std::vector<Node> nonterminals(const std::map<Node, RationalVector>& m) {
    return nonterminal_nodes(m);
}

RationalVector vector_defect(const std::map<Node, RationalVector>& psi, const Node& nu) {
    RationalVector d = psi.at(nu);
    for (const auto& c : children_of(psi, nu)) {
        d = d - psi.at(c);
    }
    return d;
}

StepFn combination(const StepFn& target, const NodeMap& values,
                   const std::map<Node, ComplexRational>& beta) {
    std::vector<std::pair<ComplexRational, StepFn>> terms;
    terms.emplace_back(ComplexRational(1), target);
    for (const auto& [nu, b] : beta) {
        terms.emplace_back(-b, values.at(nu));
    }
    return linear_combine(terms);
}

}  // namespace

StepFn summativity_defect(const NodeMap& psi, const Node& nu) {
    StepFn d = psi.at(nu);
    for (const auto& c : children_of(psi, nu)) {
        d -= psi.at(c);
    }
    return d;
}

std::optional<SuccessCertificate> success_certify(const Presentation& P, const NodeMap& psi, long N,
                                                  const WitnessOptions& opt) {
    SuccessCertificate cert;
    cert.p = P.p();
    cert.level = N;
    cert.values = psi;
    const Rational bound = pow2(-N);
    for (const auto& nu : nonterminal_nodes(psi)) {
        const Interval d = summativity_defect(psi, nu).norm(P.p(), N + 8);
        if (!(d.hi() < bound)) {
            return std::nullopt;
        }
        cert.defects[nu] = d;
    }
    for (std::size_t j = 0; j < target_count(P, N); ++j) {
        StepFn target = P.generator(j);
        auto w = dist_to_span_witness(target, psi, P.p(), N, opt);
        if (!w) {
            return std::nullopt;
        }
        cert.targets.push_back(std::move(target));
        cert.target_indices.push_back(j);
        cert.betas.push_back(std::move(w->beta));
        cert.residuals.push_back(w->residual);
    }
    return cert;
}

std::optional<SuccessCertificate> success_certify(const Presentation& P,
                                                  const std::map<Node, RationalVector>& psi,
                                                  long N, const WitnessOptions& opt) {
    SuccessCertificate cert;
    cert.p = P.p();
    cert.level = N;
    cert.vector_form = true;
    cert.vectors = psi;
    const Rational bound = pow2(-N);
    for (const auto& nu : nonterminals(psi)) {
        const Interval d = P.norm(vector_defect(psi, nu), N + 8);
        if (!(d.hi() < bound)) {
            return std::nullopt;
        }
        cert.defects[nu] = d;
    }
    for (std::size_t j = 0; j < target_count(P, N); ++j) {
        auto w = dist_to_span_witness(P, RationalVector::unit(j), psi, N, opt);
        if (!w) {
            return std::nullopt;
        }
        cert.target_indices.push_back(j);
        cert.betas.push_back(std::move(w->beta));
        cert.residuals.push_back(w->residual);
    }
    return cert;
}

namespace {

CertificateCheck fail(std::string why) { return {false, std::move(why)}; }

CertificateCheck check_step_form(const SuccessCertificate& cert) {
    const Rational bound = pow2(-cert.level);
    const long k = cert.level + 8;
    if (cert.targets.size() != cert.betas.size() || cert.betas.size() != cert.residuals.size()) {
        return fail("witness lists have different lengths");
    }
    for (const auto& nu : nonterminal_nodes(cert.values)) {
        if (!cert.defects.count(nu)) {
            return fail("missing defect for node " + to_string(nu));
        }
        const Interval d = summativity_defect(cert.values, nu).norm(cert.p, k);
        if (!(d.hi() < bound)) {
            return fail("defect at " + to_string(nu) + " is not below 2^-level");
        }
    }
    for (std::size_t j = 0; j < cert.targets.size(); ++j) {
        for (const auto& [nu, b] : cert.betas[j]) {
            if (!cert.values.count(nu)) {
                return fail("witness refers to unknown node " + to_string(nu));
            }
        }
        const Interval r = combination(cert.targets[j], cert.values, cert.betas[j]).norm(cert.p, k);
        if (!(r.hi() < bound)) {
            return fail("residual of target " + std::to_string(j) + " is not below 2^-level");
        }
        if (!r.intersects(cert.residuals[j])) {
            return fail("stored residual of target " + std::to_string(j) + " is inconsistent");
        }
    }
    return {true, ""};
}

}  // namespace

CertificateCheck verify_certificate(const SuccessCertificate& cert) {
    if (cert.vector_form) {
        return fail("vector-form certificates need the presentation's norm oracle");
    }
    return check_step_form(cert);
}

CertificateCheck verify_certificate(const SuccessCertificate& cert, const Presentation& P) {
    if (!cert.p.same_as(P.p())) {
        return fail("exponent differs from the presentation's");
    }
    std::size_t expected = target_count(P, cert.level);
    if (cert.target_indices.size() != expected) {
        return fail("certificate covers the wrong number of generators");
    }
    for (std::size_t j = 0; j < expected; ++j) {
        if (cert.target_indices[j] != j) {
            return fail("target indices out of order");
        }
    }
    if (!cert.vector_form) {
        if (P.is_white_box()) {
            for (std::size_t j = 0; j < cert.targets.size(); ++j) {
                if (!(cert.targets[j] == P.generator(j))) {
                    return fail("target " + std::to_string(j) + " is not the generator");
                }
            }
        }
        return check_step_form(cert);
    }
    const Rational bound = pow2(-cert.level);
    const long k = cert.level + 8;
    for (const auto& nu : nonterminals(cert.vectors)) {
        if (!(P.norm(vector_defect(cert.vectors, nu), k).hi() < bound)) {
            return fail("defect at " + to_string(nu) + " is not below 2^-level");
        }
    }
    if (cert.betas.size() != expected || cert.residuals.size() != expected) {
        return fail("witness lists have the wrong length");
    }
    for (std::size_t j = 0; j < expected; ++j) {
        RationalVector r = RationalVector::unit(j);
        for (const auto& [nu, b] : cert.betas[j]) {
            auto it = cert.vectors.find(nu);
            if (it == cert.vectors.end()) {
                return fail("witness refers to unknown node " + to_string(nu));
            }
            r = r - b * it->second;
        }
        if (!(P.norm(r, k).hi() < bound)) {
            return fail("residual of target " + std::to_string(j) + " is not below 2^-level");
        }
    }
    return {true, ""};
}

std::pair<long, SuccessCertificate> certified_level(const Presentation& P, const NodeMap& psi,
                                                    long n_max, const WitnessOptions& opt) {
    std::pair<long, SuccessCertificate> best{-1, SuccessCertificate{}};
    for (long N = 0; N <= n_max; ++N) {
        auto c = success_certify(P, psi, N, opt);
        if (!c) {
            break;
        }
        best = {N, std::move(*c)};
    }
    return best;
}

}  // namespace lpiso
