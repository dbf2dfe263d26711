#include "zeroline/cli.hpp"

#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zeroline/etalocal.hpp"
#include "zeroline/milnorwitt.hpp"
#include "zeroline/powerops.hpp"

namespace zeroline::cli {

using nlohmann::json;

namespace {

struct Outcome {
    Outcome(json r = json::object(), std::string s = "ok") : result(std::move(r)), status(std::move(s)) {}

    json result;
    std::string status;
    std::string tsv; // replaces the flattened table when set
};

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

// "Q:<1,-1,2>" -> (Q, "<1,-1,2>")
std::pair<FieldSpec, std::string> split_field(const std::string& text) {
    const size_t colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("expected a field prefix as in 'Q:<1,2>', got '" + text + "'");
    return {parse_field(trim(text.substr(0, colon))), trim(text.substr(colon + 1))};
}

std::string prefixed(const FieldSpec& F, const std::string& s) { return F.name() + ":" + s; }

json optional_order(const std::optional<uint64_t>& o) { return o ? json(*o) : json(nullptr); }
json optional_int(const std::optional<int>& o) { return o ? json(*o) : json(nullptr); }

json verdict_json(const NilpotenceVerdict& v) {
    return {{"is_torsion", v.is_torsion},
            {"is_nilpotent", to_string(v.is_nilpotent)},
            {"witness_exponent", optional_int(v.witness_exponent)},
            {"constructed_exponent", optional_int(v.constructed_exponent)},
            {"cap", v.cap},
            {"rule_chain", v.rule_chain}};
}

std::string verdict_status(Tri t) { return t == Tri::Unknown ? "unknown" : "ok"; }

json nilpotence_json(const NilpotenceInfo& n) {
    return {{"is_nilpotent", n.nilpotent}, {"exponent", optional_int(n.exponent)}, {"rule_chain", n.rules}};
}

json torsion_json(const TorsionInfo& t) { return {{"is_torsion", t.torsion}, {"order", optional_order(t.order)}}; }

json invariants_json(const DiagonalForm& form) {
    const FormInvariants inv = invariants(form);
    json hasse = json::object();
    for (const auto& [place, s] : inv.hasse) hasse[place.to_string()] = s;
    return {{"form", prefixed(form.field, to_string(form))},
            {"rank", inv.rank},
            {"det", to_string(inv.det_class)},
            {"signed_disc", to_string(inv.signed_disc)},
            {"hasse", hasse},
            {"signatures", inv.signatures}};
}

json gw_json(const GWClass& x) {
    return {{"class", prefixed(x.witt.field, to_string(x))},
            {"witt", prefixed(x.witt.field, to_string(x.witt))},
            {"rank", x.rank}};
}

json nf_json(const std::map<int, MilnorNF>& nfs) {
    json out = json::object();
    for (const auto& [d, nf] : nfs) out[std::to_string(d)] = to_string(nf);
    return out;
}

json mw_json(const MWElt& x) {
    return {{"element", to_string(x)},
            {"degree", x.degree},
            {"homotopy_bidegree", {-x.degree, -x.degree}},
            {"milnor", x.degree > 0 ? json(prefixed(x.field, to_string(x.km))) : json(nullptr)},
            {"witt", prefixed(x.field, to_string(x.w))}};
}

BiDeg parse_bideg(const std::string& s) {
    const size_t comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("expected a bidegree 'a,b', got '" + s + "'");
    try {
        return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw DomainError("expected a bidegree 'a,b', got '" + s + "'");
    }
}

std::pair<int64_t, int64_t> parse_range(const std::string& s) {
    const size_t colon = s.find(':', s.empty() || s[0] != '-' ? 0 : 1);
    if (colon == std::string::npos) throw DomainError("expected a range 'lo:hi', got '" + s + "'");
    try {
        return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw DomainError("expected a range 'lo:hi', got '" + s + "'");
    }
}

void flatten(const json& j, const std::string& prefix, char sep, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, sep, out);
    } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", sep, out);
    } else {
        out << prefix << (sep == ':' ? ": " : "\t") << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

int exit_for(const std::string& status) {
    if (status == "ok") return Ok;
    if (status == "unknown") return Unknown;
    if (status == "unsupported") return NotSupported;
    return Internal;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact arithmetic for Witt, Grothendieck-Witt, Milnor and Milnor-Witt K-theory"};
    app.name("zeroline");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with option defaults");
    app.set_version_flag("--version", kVersion);

    std::string format = "json";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "tsv", "text"}));
    ScanOptions scan;
    app.add_option("--cap", scan.cap, "Witness exponent cap")->check(CLI::Range(1, 4096));
    app.add_option("--budget", scan.budget, "Enumeration budget for scans");
    app.add_option("--samples", scan.samples, "Random samples for scans over Q");
    app.add_option("--seed", scan.seed, "Seed for sampled scans");
    app.add_option("--rank-bound", scan.rank_bound, "Largest form rank enumerated by scans")->check(CLI::Range(1, 64));

    std::string command;
    std::function<Outcome()> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::function<Outcome()> fn) {
        CLI::App* sub = parent->add_subcommand(name, help);
        const std::string full = parent == &app ? name : parent->get_name() + " " + name;
        sub->callback([&action, &command, fn, full] {
            command = full;
            action = fn;
        });
        return sub;
    };
    auto group = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->require_subcommand(1);
        return sub;
    };

    std::string lit1, lit2, fieldtxt;
    int n_arg = 1;

    // field
    CLI::App* field = group("field", "Field information and Hilbert symbols");
    leaf(field, "info", "Basic facts about a field", [&] {
        const FieldSpec F = parse_field(fieldtxt);
        json r{{"field", F.name()},
               {"characteristic", F.characteristic()},
               {"formally_real", is_formally_real(F)},
               {"orderings", orderings(F).size()},
               {"minus_one_is_square", minus_one_is_square(F)}};
        if (F.is_finite()) r["least_nonresidue"] = galois_field(F.q).least_nonresidue();
        return Outcome{r};
    })->add_option("field", fieldtxt, "Q, R, C or Fq")->required();
    std::string place = "inf";
    {
        CLI::App* h = leaf(field, "hilbert", "Hilbert symbol (a,b)_v", [&] {
            const FieldSpec F = parse_field(fieldtxt);
            Place v = place == "inf" ? Place::real() : Place::at(std::stoull(place));
            const int s = hilbert_symbol(square_class(parse_unit(F, lit1)), square_class(parse_unit(F, lit2)), v);
            return Outcome{{{"field", F.name()}, {"a", lit1}, {"b", lit2}, {"place", v.to_string()}, {"symbol", s}}};
        });
        h->add_option("field", fieldtxt)->required();
        h->add_option("a", lit1)->required();
        h->add_option("b", lit2)->required();
        h->add_option("--place", place, "inf or a prime");
    }

    // form
    CLI::App* form = group("form", "Diagonal quadratic forms");
    auto form_leaf = [&](const std::string& name, const std::string& help, std::function<json(const DiagonalForm&)> fn) {
        leaf(form, name, help, [&, fn] {
            auto [F, body] = split_field(lit1);
            return Outcome{fn(parse_form(F, body))};
        })->add_option("form", lit1, "Form literal, e.g. Q:<1,-1,2>")->required();
    };
    form_leaf("invariants", "Rank, discriminant, Hasse invariants and signatures",
              [](const DiagonalForm& f) { return invariants_json(f); });
    form_leaf("witt", "Anisotropic representative of the Witt class", [](const DiagonalForm& f) {
        WittClass w = witt_class(f);
        return json{{"form", prefixed(f.field, to_string(f))},
                    {"witt", prefixed(f.field, to_string(w))},
                    {"anisotropic_rank", w.aniso.entries.size()},
                    {"hyperbolic", w.aniso.entries.empty()}};
    });
    form_leaf("torsion", "Torsion in the Witt ring", [&](const DiagonalForm& f) {
        WittClass w = witt_class(f);
        json r = torsion_json(is_torsion(w, scan.cap));
        r["witt"] = prefixed(f.field, to_string(w));
        r["signatures"] = signatures(w);
        return r;
    });
    form_leaf("nilpotent", "Nilpotence in the Witt ring", [&](const DiagonalForm& f) {
        WittClass w = witt_class(f);
        json r = nilpotence_json(is_nilpotent(w, scan.cap));
        r["witt"] = prefixed(f.field, to_string(w));
        return r;
    });
    {
        CLI::App* ip = leaf(form, "ipower", "Membership in I^n and the e_n invariant", [&] {
            auto [F, body] = split_field(lit1);
            WittClass w = witt_class(parse_form(F, body));
            json r{{"witt", prefixed(F, to_string(w))}, {"n", n_arg}, {"in_power", in_fundamental_power(w, n_arg)}};
            if (in_fundamental_power(w, n_arg)) r["e_n"] = to_string(en_invariant(w, n_arg));
            return Outcome{r};
        });
        ip->add_option("form", lit1)->required();
        ip->add_option("--n", n_arg, "Power of the fundamental ideal")->check(CLI::Range(0, 64));
    }

    // gw
    CLI::App* gw = group("gw", "Grothendieck-Witt classes");
    auto gw_parse = [](const std::string& s) {
        auto [F, body] = split_field(s);
        return parse_gw(F, body);
    };
    leaf(gw, "class", "Normalize a GW literal", [&] { return Outcome{gw_json(gw_parse(lit1))}; })
        ->add_option("x", lit1, "e.g. Q:<1,2> - 1")
        ->required();
    {
        CLI::App* m = leaf(gw, "mul", "Product of two classes", [&] {
            return Outcome{gw_json(gw_parse(lit1) * gw_parse(lit2))};
        });
        m->add_option("x", lit1)->required();
        m->add_option("y", lit2)->required();
    }
    leaf(gw, "torsion", "Torsion in GW", [&] {
        GWClass x = gw_parse(lit1);
        json r = torsion_json(is_torsion(x, scan.cap));
        r["class"] = prefixed(x.witt.field, to_string(x));
        return Outcome{r};
    })->add_option("x", lit1)->required();
    leaf(gw, "nilpotent", "Nilpotence in GW", [&] {
        GWClass x = gw_parse(lit1);
        json r = nilpotence_json(is_nilpotent(x, scan.cap));
        r["class"] = prefixed(x.witt.field, to_string(x));
        return Outcome{r};
    })->add_option("x", lit1)->required();

    // km
    CLI::App* km = group("km", "Milnor K-theory");
    auto km_parse = [](const std::string& s) {
        auto [F, body] = split_field(s);
        return parse_graded_milnor(F, body);
    };
    leaf(km, "nf", "Normal form", [&] {
        GradedMilnor x = km_parse(lit1);
        return Outcome{{{"element", prefixed(x.field, to_string(x))},
                        {"normal_form", nf_json(km_normal_form(x))},
                        {"is_zero", km_is_zero(x)},
                        {"order", optional_order(km_order(x))}}};
    })->add_option("x", lit1, "e.g. Q:2*{-1} + {2,3}")->required();
    {
        CLI::App* m = leaf(km, "mul", "Product", [&] {
            GradedMilnor p = km_mul(km_parse(lit1), km_parse(lit2));
            return Outcome{{{"product", prefixed(p.field, to_string(p))}, {"normal_form", nf_json(km_normal_form(p))}}};
        });
        m->add_option("x", lit1)->required();
        m->add_option("y", lit2)->required();
    }
    leaf(km, "power-form", "Write a power of a degree-1 element as {-1} times another", [&] {
        auto [F, body] = split_field(lit1);
        MilnorElt a = parse_milnor(F, body);
        PowerForm pf = lemma_power_form(a);
        return Outcome{{{"element", prefixed(F, to_string(a))},
                        {"m", pf.m},
                        {"gamma", prefixed(F, to_string(pf.gamma))},
                        {"verified", pf.verified},
                        {"trace", pf.trace}}};
    })->add_option("x", lit1)->required();
    leaf(km, "nilpotent", "Nilpotence verdict", [&] {
        GradedMilnor x = km_parse(lit1);
        NilpotenceVerdict v = km_is_nilpotent(x, scan.cap);
        json r = verdict_json(v);
        r["element"] = prefixed(x.field, to_string(x));
        return Outcome{r, verdict_status(v.is_nilpotent)};
    })->add_option("x", lit1)->required();

    // mw
    CLI::App* mw = group("mw", "Milnor-Witt K-theory");
    leaf(mw, "make", "Validate and normalize an element", [&] { return Outcome{mw_json(parse_mw(lit1))}; })
        ->add_option("x", lit1, "e.g. MW(Q, 1; {2} | <1,-2>)")
        ->required();
    {
        CLI::App* m = leaf(mw, "mul", "Product", [&] { return Outcome{mw_json(mw_mul(parse_mw(lit1), parse_mw(lit2)))}; });
        m->add_option("x", lit1)->required();
        m->add_option("y", lit2)->required();
    }
    leaf(mw, "torsion", "Torsion verdict", [&] {
        MWElt x = parse_mw(lit1);
        MWTorsion t = mw_is_torsion(x, scan.cap);
        json r = mw_json(x);
        r["is_torsion"] = to_string(t.torsion);
        r["order"] = optional_order(t.order);
        return Outcome{r, verdict_status(t.torsion)};
    })->add_option("x", lit1)->required();
    leaf(mw, "nilpotent", "Nilpotence verdict", [&] {
        MWElt x = parse_mw(lit1);
        NilpotenceVerdict v = mw_is_nilpotent(x, scan.cap);
        json r = verdict_json(v);
        r.update(mw_json(x));
        return Outcome{r, verdict_status(v.is_nilpotent)};
    })->add_option("x", lit1)->required();
    int scan_degree = 0;
    {
        CLI::App* s = leaf(mw, "scan", "Cross-check torsion and nilpotence over one degree", [&] {
            const FieldSpec F = parse_field(fieldtxt);
            ScanReport r = nishida_scan(F, scan_degree, scan);
            return Outcome{{{"field", F.name()},
                            {"degree", r.degree},
                            {"homotopy_bidegree", {-r.degree, -r.degree}},
                            {"sampled", r.sampled},
                            {"budget_exhausted", r.budget_exhausted},
                            {"enumeration", r.enumeration},
                            {"checked", r.checked},
                            {"torsion", r.torsion},
                            {"nilpotent", r.nilpotent},
                            {"disagreements", r.disagreements},
                            {"disagreement_examples", r.disagreement_examples},
                            {"torsion_not_nilpotent", r.counterexamples},
                            {"torsion_not_nilpotent_examples", r.counterexample_examples}},
                           r.budget_exhausted ? "unknown" : "ok"};
        });
        s->add_option("--field", fieldtxt)->required();
        s->add_option("--degree", scan_degree, "Milnor-Witt degree n")->required()->check(CLI::Range(-16, 16));
    }

    // etalocal
    CLI::App* eta = group("etalocal", "The eta-local sphere over C and its map to KT");
    std::string bideg = "0,0", window = "-20:20,-20:20";
    bool invert = false;
    {
        CLI::App* d = leaf(eta, "dim", "Dimension of the ring in one bidegree", [&] {
            const BiDeg b = parse_bideg(bideg);
            json basis = json::array();
            for (const auto& m : r_basis(b, invert)) basis.push_back(to_string(m));
            return Outcome{
                {{"bidegree", {b.a, b.b}}, {"invert_mu9", invert}, {"dim", r_dim(b, invert)}, {"basis", basis}}};
        });
        d->add_option("--bideg", bideg, "a,b")->required();
        d->add_flag("--invert-mu9", invert);
    }
    leaf(eta, "ktdim", "Dimension of KT in one bidegree", [&] {
        const BiDeg b = parse_bideg(bideg);
        return Outcome{{{"bidegree", {b.a, b.b}}, {"dim", kt_dim(b)}}};
    })->add_option("--bideg", bideg, "a,b")->required();
    leaf(eta, "map", "Image under the unit map (mu9 inverted)", [&] {
        EtaLocalElt x = parse_eta_local(lit1, true);
        KTElt y = unit_map(x);
        json support = json::array();
        for (const auto& d : y.support) support.push_back({d.a, d.b});
        return Outcome{{{"element", to_string(x)}, {"image", to_string(y)}, {"image_bidegrees", support}}};
    })->add_option("x", lit1, "e.g. eta^2 * mu9^-1")->required();
    leaf(eta, "verify", "Surjectivity and kernel of the unit map on a window", [&] {
        const size_t comma = window.find(',');
        if (comma == std::string::npos) throw DomainError("expected --window a0:a1,b0:b1");
        auto [a0, a1] = parse_range(window.substr(0, comma));
        auto [b0, b1] = parse_range(window.substr(comma + 1));
        if ((a1 - a0) > 4000 || (b1 - b0) > 4000) throw Unsupported("window too large");
        WindowReport rep = verify_main2(a0, a1, b0, b1);
        json table = json::array();
        for (const auto& r : rep.rows) table.push_back({r.d.a, r.d.b, r.r_dim, r.kt_dim, r.rank, r.kernel_dim});
        Outcome o{{{"window", {{"stems", {a0, a1}}, {"weights", {b0, b1}}}},
                   {"surjective_everywhere", rep.surjective_everywhere},
                   {"shift_match", rep.shift_match},
                   {"two_copies", rep.two_copies},
                   {"kernel_dims_columns", {"a", "b", "r_dim", "kt_dim", "rank", "kernel_dim"}},
                   {"kernel_dims", table}}};
        o.tsv = window_chart_tsv(rep);
        return o;
    })->add_option("--window", window, "a0:a1,b0:b1");

    // powerops
    CLI::App* pw = group("powerops", "Arithmetic of power operations");
    uint64_t p = 2, v = 1, m = 1;
    unsigned i = 1;
    int64_t q = 0, w = 0, s = 0, t = 0;
    {
        CLI::App* b = leaf(pw, "binom", "p-adic valuation of C(p^i v, p)", [&] {
            BinomValuation r = binom_valuation(p, i, v);
            return Outcome{{{"p", r.p},
                            {"i", r.i},
                            {"v", r.v},
                            {"n", to_string(r.r)},
                            {"binomial", to_string(r.binomial)},
                            {"valuation", r.valuation},
                            {"bound", r.bound},
                            {"satisfies_bound", r.satisfies_bound}}};
        });
        b->add_option("--p", p)->required();
        b->add_option("--i", i)->required();
        b->add_option("--v", v)->required();
    }
    {
        CLI::App* b = leaf(pw, "bound", "Nilpotence exponent bound (1+m(p+1))^i", [&] {
            ExponentBound r = nishida_exponent_bound(p, i, m);
            return Outcome{{{"p", r.p}, {"i", r.i}, {"m", r.m}, {"N", to_string(r.N)}, {"trace", r.trace}}};
        });
        b->add_option("--p", p)->required();
        b->add_option("--i", i)->required();
        b->add_option("--m", m)->required();
    }
    {
        CLI::App* b = leaf(pw, "kp", "Bidegrees for the p-th extended power of S^{q,w}", [&] {
            KPBidegrees r = kp_bidegrees(p, q, w, s, t);
            return Outcome{{{"source_total", {r.source_total.a, r.source_total.b}},
                            {"target_sphere", {r.target_sphere.a, r.target_sphere.b}},
                            {"map_bidegree", {r.map_bidegree.a, r.map_bidegree.b}}}};
        });
        b->add_option("--p", p)->required();
        b->add_option("--q", q)->required();
        b->add_option("--w", w)->required();
        b->add_option("--s", s)->required();
        b->add_option("--t", t)->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "zeroline: " << e.what() << '\n';
        return Usage;
    }
    if (!action) {
        err << "zeroline: no command given\n";
        return Usage;
    }

    Outcome o;
    int code = Ok;
    try {
        o = action();
        code = exit_for(o.status);
    } catch (const DomainError& e) {
        err << "zeroline: " << e.what() << '\n';
        o = Outcome{json{{"message", e.what()}}, "error"};
        code = Usage;
    } catch (const Unsupported& e) {
        err << "zeroline: unsupported: " << e.what() << '\n';
        o = Outcome{json{{"message", e.what()}}, "unsupported"};
        code = NotSupported;
    } catch (const std::exception& e) {
        err << "zeroline: internal error: " << e.what() << '\n';
        o = Outcome{json{{"message", e.what()}}, "error"};
        code = Internal;
    }

    if (format == "json") {
        json doc{{"tool", "zeroline"}, {"version", kVersion}, {"status", o.status}, {"command", command}, {"result", o.result}};
        out << doc.dump(2) << '\n';
    } else if (format == "tsv" && !o.tsv.empty() && o.status == "ok") {
        out << o.tsv;
    } else {
        const char sep = format == "tsv" ? '\t' : ':';
        if (format == "tsv") out << "key\tvalue\n";
        flatten(json{{"status", o.status}}, "", sep, out);
        flatten(o.result, "", sep, out);
    }
    return code;
}

} // namespace zeroline::cli
