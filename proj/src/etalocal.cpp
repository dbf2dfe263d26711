#include "zeroline/etalocal.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "zeroline/arith.hpp"

namespace zeroline {

namespace {

int64_t floor_mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

} // namespace

BiDeg Monomial::bidegree() const {
    return {eta * kEtaDeg.a + sigma * kSigmaDeg.a + mu * kMu9Deg.a, eta * kEtaDeg.b + sigma * kSigmaDeg.b + mu * kMu9Deg.b};
}

EtaLocalElt eta_local(const std::vector<Monomial>& monomials, bool mu_inverted) {
    EtaLocalElt x{mu_inverted, {}};
    for (const auto& m : monomials) {
        if (m.sigma < 0) throw DomainError("negative sigma exponent");
        if (!x.terms.erase(m)) x.terms.insert(m);
    }
    return r_normal_form(x);
}

EtaLocalElt r_normal_form(const EtaLocalElt& x) {
    EtaLocalElt out{x.mu_inverted, {}};
    for (const auto& m : x.terms) {
        if (m.mu < 0 && !x.mu_inverted) throw DomainError("negative mu9 exponent requires inverting mu9");
        if (m.sigma < 0) throw DomainError("negative sigma exponent");
        if (m.sigma >= 2) continue;
        if (!out.terms.erase(m)) out.terms.insert(m);
    }
    return out;
}

EtaLocalElt operator+(const EtaLocalElt& x, const EtaLocalElt& y) {
    EtaLocalElt out = x;
    out.mu_inverted = x.mu_inverted || y.mu_inverted;
    for (const auto& m : y.terms)
        if (!out.terms.erase(m)) out.terms.insert(m);
    return out;
}

EtaLocalElt operator*(const EtaLocalElt& x, const EtaLocalElt& y) {
    EtaLocalElt out{x.mu_inverted || y.mu_inverted, {}};
    for (const auto& m : x.terms)
        for (const auto& n : y.terms) {
            Monomial p{m.eta + n.eta, m.sigma + n.sigma, m.mu + n.mu};
            if (p.sigma >= 2) continue;
            if (!out.terms.erase(p)) out.terms.insert(p);
        }
    return out;
}

std::vector<Monomial> r_basis(BiDeg d, bool invert_mu9) {
    // a + 7e + 9b = A and a + 4e + 5b = B give 3e + 4b = A - B
    std::vector<Monomial> out;
    for (int64_t e = 0; e <= 1; ++e) {
        const int64_t r = d.a - d.b - 3 * e;
        if (floor_mod(r, 4) != 0) continue;
        const int64_t mu = r / 4;
        if (mu < 0 && !invert_mu9) continue;
        const int64_t eta = d.b - 4 * e - 5 * mu;
        out.push_back(Monomial{eta, e, mu});
    }
    return out;
}

int r_dim(BiDeg d, bool invert_mu9) { return static_cast<int>(r_basis(d, invert_mu9).size()); }

int kt_dim(BiDeg d) { return floor_mod(d.a - d.b, 4) == 0 ? 1 : 0; }

KTElt kt_element(const std::vector<BiDeg>& degrees) {
    KTElt x;
    for (const auto& d : degrees) {
        if (!kt_dim(d)) throw DomainError("KT is zero in bidegree " + to_string(d));
        if (!x.support.erase(d)) x.support.insert(d);
    }
    return x;
}

KTElt operator+(const KTElt& x, const KTElt& y) {
    KTElt out = x;
    for (const auto& d : y.support)
        if (!out.support.erase(d)) out.support.insert(d);
    return out;
}

KTElt operator*(const KTElt& x, const KTElt& y) {
    KTElt out;
    for (const auto& d : x.support)
        for (const auto& e : y.support) {
            const BiDeg s = d + e;
            if (!out.support.erase(s)) out.support.insert(s);
        }
    return out;
}

KTElt unit_map(const EtaLocalElt& x) {
    KTElt out;
    for (const auto& m : r_normal_form(x).terms) {
        if (m.sigma != 0) continue;
        const BiDeg d = m.bidegree();
        if (!kt_dim(d)) continue;
        if (!out.support.erase(d)) out.support.insert(d);
    }
    return out;
}

WindowReport verify_main2(int64_t a0, int64_t a1, int64_t b0, int64_t b1) {
    WindowReport rep;
    rep.a0 = a0;
    rep.a1 = a1;
    rep.b0 = b0;
    rep.b1 = b1;
    for (int64_t a = a0; a <= a1; ++a)
        for (int64_t b = b0; b <= b1; ++b) {
            WindowRow row;
            row.d = {a, b};
            const auto basis = r_basis(row.d, true);
            row.r_dim = static_cast<int>(basis.size());
            row.kt_dim = kt_dim(row.d);
            // the target is at most one-dimensional: the rank is 1 iff some
            // basis vector has a nonzero image
            for (const auto& m : basis) {
                KTElt img = unit_map(EtaLocalElt{true, {m}});
                if (!img.is_zero()) {
                    if (img.support.size() != 1 || *img.support.begin() != row.d)
                        throw std::logic_error("unit_map does not preserve bidegree");
                    row.rank = 1;
                }
            }
            row.kernel_dim = row.r_dim - row.rank;
            row.kt_shifted = kt_dim(row.d - kSigmaDeg);
            rep.surjective_everywhere &= row.rank == row.kt_dim;
            rep.shift_match &= row.kernel_dim == row.kt_shifted;
            rep.two_copies &= row.r_dim == row.kt_dim + row.kt_shifted;
            rep.rows.push_back(row);
        }
    return rep;
}

std::string window_chart_tsv(const WindowReport& report) {
    std::ostringstream os;
    os << "stem\\weight";
    for (int64_t b = report.b0; b <= report.b1; ++b) os << '\t' << b;
    os << '\n';
    size_t idx = 0;
    for (int64_t a = report.a0; a <= report.a1; ++a) {
        os << a;
        for (int64_t b = report.b0; b <= report.b1; ++b, ++idx) {
            const auto& r = report.rows[idx];
            os << '\t' << r.r_dim << '/' << r.rank << '/' << r.kernel_dim;
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Literals

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int64_t parse_exponent(std::string_view s) {
    s = trim(s);
    std::string t(s);
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    size_t used = 0;
    int64_t v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        throw DomainError("bad exponent '" + std::string(s) + "'");
    }
    if (used != t.size()) throw DomainError("bad exponent '" + std::string(s) + "'");
    if (v > (int64_t{1} << 40) || v < -(int64_t{1} << 40)) throw Unsupported("exponent out of range");
    return v;
}

Monomial parse_monomial(std::string_view text) {
    Monomial m;
    text = trim(text);
    if (text == "1") return m;
    size_t start = 0;
    while (start <= text.size()) {
        size_t star = text.find('*', start);
        std::string_view factor = trim(text.substr(start, star == std::string_view::npos ? star : star - start));
        std::string_view name = factor;
        int64_t e = 1;
        const size_t caret = factor.find('^');
        if (caret != std::string_view::npos) {
            name = trim(factor.substr(0, caret));
            e = parse_exponent(factor.substr(caret + 1));
        }
        if (name == "eta") m.eta += e;
        else if (name == "sigma") m.sigma += e;
        else if (name == "mu9") m.mu += e;
        else if (name == "1" && caret == std::string_view::npos) {
        } else throw DomainError("unknown factor '" + std::string(factor) + "'");
        if (star == std::string_view::npos) break;
        start = star + 1;
    }
    if (m.sigma < 0) throw DomainError("negative sigma exponent");
    return m;
}

} // namespace

EtaLocalElt parse_eta_local(std::string_view text, bool mu_inverted) {
    text = trim(text);
    if (text.empty()) throw DomainError("empty literal");
    EtaLocalElt x{mu_inverted, {}};
    if (text == "0") return x;
    size_t start = 0;
    while (true) {
        size_t plus = text.find('+', start);
        std::string_view part = text.substr(start, plus == std::string_view::npos ? plus : plus - start);
        if (trim(part).empty()) throw DomainError("empty summand");
        Monomial m = parse_monomial(part);
        if (!x.terms.erase(m)) x.terms.insert(m);
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    return r_normal_form(x);
}

std::string to_string(const Monomial& m) {
    std::vector<std::string> f;
    auto add = [&](const char* name, int64_t e) {
        if (e == 0) return;
        f.push_back(e == 1 ? std::string(name) : std::string(name) + "^" + std::to_string(e));
    };
    add("eta", m.eta);
    add("sigma", m.sigma);
    add("mu9", m.mu);
    if (f.empty()) return "1";
    std::string out = f[0];
    for (size_t i = 1; i < f.size(); ++i) out += " * " + f[i];
    return out;
}

std::string to_string(const EtaLocalElt& x) {
    if (x.terms.empty()) return "0";
    std::string out;
    for (const auto& m : x.terms) out += (out.empty() ? "" : " + ") + to_string(m);
    return out;
}

std::string to_string(const BiDeg& d) { return "(" + std::to_string(d.a) + "," + std::to_string(d.b) + ")"; }

std::string to_string(const KTElt& x) {
    if (x.support.empty()) return "0";
    std::string out;
    for (const auto& d : x.support) out += (out.empty() ? "" : " + ") + std::string("g") + to_string(d);
    return out;
}

} // namespace zeroline
