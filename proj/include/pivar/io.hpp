#pragma once

#include "pivar/algebra.hpp"
#include "pivar/builders.hpp"
#include "pivar/forms.hpp"
#include "pivar/polynomials.hpp"
#include "pivar/presheaf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace pivar {

// ---------------------------------------------------------------------------
// JSON schemas. Rationals travel as "p/q" strings.
// ---------------------------------------------------------------------------

inline Json rat_vec_to_json(const QVec& v) {
    Json j = Json::array();
    for (const auto& q : v) j.push_back(rat_to_string(q));
    return j;
}

inline QVec rat_vec_from_json(const Json& j) {
    QVec v;
    for (const auto& s : j) v.push_back(rat_from_string(s.get<std::string>()));
    return v;
}

inline Json matrix_to_json(const QMat& m) {
    Json j = Json::array();
    for (const auto& row : m.a) j.push_back(rat_vec_to_json(row));
    return j;
}

inline QMat matrix_from_json(const Json& j) {
    QMat m(static_cast<int>(j.size()), j.empty() ? 0 : static_cast<int>(j[0].size()));
    for (int r = 0; r < m.rows; ++r) {
        if (static_cast<int>(j[r].size()) != m.cols)
            throw StructuralError("ragged matrix in input");
        for (int c = 0; c < m.cols; ++c) m.a[r][c] = rat_from_string(j[r][c].get<std::string>());
    }
    return m;
}

inline Json algebra_to_json(const FiniteGradedAlgebra& a) {
    Json j;
    j["group"] = Json{{"free_rank", a.group.free_rank}, {"torsion", a.group.torsion}};
    j["dim"] = a.dim;
    j["labels"] = a.labels;
    Json degs = Json::array();
    for (const auto& g : a.degrees) degs.push_back(g);
    j["degrees"] = degs;
    j["unit"] = rat_vec_to_json(a.unit);
    Json mul = Json::array();
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k)
            for (const auto& [t, c] : a.basis_product(i, k))
                mul.push_back(Json::array({i, k, t, rat_to_string(c)}));
    j["mul"] = mul;
    return j;
}

inline FiniteGradedAlgebra algebra_from_json(const Json& j) {
    if (!j.contains("group") || !j.contains("dim"))
        throw StructuralError("algebra file needs 'group' and 'dim'");
    GradingGroup group(j["group"].value("free_rank", 0),
                       j["group"].value("torsion", std::vector<std::int64_t>{}));
    const int dim = j["dim"].get<int>();
    FiniteGradedAlgebra a(group, dim);
    if (j.contains("labels")) a.labels = j["labels"].get<std::vector<std::string>>();
    if (static_cast<int>(a.labels.size()) != dim) throw StructuralError("label count mismatch");
    if (j.contains("degrees")) {
        const auto& degs = j["degrees"];
        if (static_cast<int>(degs.size()) != dim) throw StructuralError("degree count mismatch");
        for (int i = 0; i < dim; ++i) a.set_degree(i, degs[i].get<GroupElem>());
    }
    if (j.contains("unit")) {
        a.unit = rat_vec_from_json(j["unit"]);
        if (static_cast<int>(a.unit.size()) != dim) throw StructuralError("unit length mismatch");
    }
    for (const auto& entry : j.value("mul", Json::array())) {
        if (entry.size() != 4) throw StructuralError("mul entries are [i, j, k, \"p/q\"]");
        a.add_structure_constant(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>(),
                                 rat_from_string(entry[3].get<std::string>()));
    }
    return a;
}

inline Json topology_to_json(const FiniteTopology& t) {
    Json j;
    j["points"] = t.points;
    Json opens = Json::array();
    for (OpenMask m : t.opens) {
        Json subset = Json::array();
        for (int i = 0; i < t.npoints(); ++i)
            if (m & (1u << i)) subset.push_back(i);
        opens.push_back(subset);
    }
    j["opens"] = opens;
    return j;
}

inline FiniteTopology topology_from_json(const Json& j) {
    FiniteTopology t;
    t.points = j.at("points").get<std::vector<std::string>>();
    if (t.npoints() > 31) throw StructuralError("too many points");
    for (const auto& subset : j.at("opens")) {
        OpenMask m = 0;
        for (const auto& idx : subset) {
            const int i = idx.get<int>();
            if (i < 0 || i >= t.npoints()) throw StructuralError("open set index out of range");
            m |= 1u << i;
        }
        t.opens.push_back(m);
    }
    t.normalize();
    return t;
}

// ---------------------------------------------------------------------------
// Builders addressable by name: "M:2", "UT:3", "E:4", "Cl:-1,-1".
// "E:oo" is the infinite Grassmann algebra (oracle-backed, identities only).
// ---------------------------------------------------------------------------

inline bool is_builder_name(const std::string& s) {
    return s.rfind("M:", 0) == 0 || s.rfind("UT:", 0) == 0 || s.rfind("E:", 0) == 0 ||
           s.rfind("Cl:", 0) == 0;
}

inline FiniteGradedAlgebra algebra_from_builder_name(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw StructuralError("not a builder name: " + s);
    const std::string kind = s.substr(0, colon);
    const std::string arg = s.substr(colon + 1);
    try {
        if (kind == "M") return build_matrix_algebra(std::stoi(arg));
        if (kind == "UT") return build_upper_triangular(std::stoi(arg));
        if (kind == "E") return build_grassmann_truncated(std::stoi(arg));
        if (kind == "Cl") {
            std::vector<Rat> q;
            std::stringstream ss(arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) q.push_back(rat_from_string(tok));
            return build_clifford(q);
        }
    } catch (const std::invalid_argument&) {
        throw StructuralError("malformed builder argument in " + s);
    }
    throw StructuralError("unknown builder " + s);
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

/// Accepts a builder name or a JSON file path.
inline FiniteGradedAlgebra load_algebra(const std::string& spec) {
    if (is_builder_name(spec)) return algebra_from_builder_name(spec);
    return algebra_from_json(read_json_file(spec));
}

// ---------------------------------------------------------------------------
// Presheaf description file: topology + named algebras + per-open sections
// + restriction matrices.
// ---------------------------------------------------------------------------

inline PresheafOfAlgebras presheaf_from_json(const Json& j) {
    PresheafOfAlgebras f;
    f.top = topology_from_json(j.at("topology"));
    std::map<std::string, FiniteGradedAlgebra> algebras;
    for (const auto& [id, spec] : j.at("algebras").items()) {
        if (spec.is_string()) algebras.emplace(id, load_algebra(spec.get<std::string>()));
        else algebras.emplace(id, algebra_from_json(spec));
    }
    auto mask_of = [&](const Json& subset) {
        OpenMask m = 0;
        for (const auto& idx : subset) m |= 1u << idx.get<int>();
        return m;
    };
    for (const auto& sec : j.at("sections")) {
        const OpenMask u = mask_of(sec.at("open"));
        const std::string id = sec.at("algebra").get<std::string>();
        if (!algebras.count(id)) throw StructuralError("unknown algebra id " + id);
        f.sections.emplace(u, algebras.at(id));
    }
    // the empty open defaults to the zero algebra
    if (!f.sections.count(0u) && f.top.is_open(0u)) {
        GradingGroup g = f.sections.empty() ? GradingGroup::trivial()
                                            : f.sections.begin()->second.group;
        f.sections.emplace(0u, FiniteGradedAlgebra::zero(g));
        for (const auto& [u, alg] : f.sections)
            if (u != 0) f.set_restriction(u, 0u, QMat(0, alg.dim));
    }
    for (const auto& r : j.value("restrictions", Json::array())) {
        const OpenMask from = mask_of(r.at("from"));
        const OpenMask to = mask_of(r.at("to"));
        QMat m = matrix_from_json(r.at("matrix"));
        // an empty matrix carries no column count; recover it from the source
        if (m.rows == 0) m = QMat(0, f.at(from).dim);
        f.set_restriction(from, to, std::move(m));
    }
    return f;
}

inline Json presheaf_to_json(const PresheafOfAlgebras& f) {
    Json j;
    j["topology"] = topology_to_json(f.top);
    Json algebras = Json::object();
    Json sections = Json::array();
    int counter = 0;
    auto subset_of = [&](OpenMask m) {
        Json subset = Json::array();
        for (int i = 0; i < f.top.npoints(); ++i)
            if (m & (1u << i)) subset.push_back(i);
        return subset;
    };
    std::map<OpenMask, std::string> ids;
    for (const auto& [u, alg] : f.sections) {
        const std::string id = "A" + std::to_string(counter++);
        ids[u] = id;
        algebras[id] = algebra_to_json(alg);
        sections.push_back(Json{{"open", subset_of(u)}, {"algebra", id}});
    }
    j["algebras"] = algebras;
    j["sections"] = sections;
    Json rests = Json::array();
    for (const auto& [pair, m] : f.restriction_maps)
        rests.push_back(Json{{"from", subset_of(pair.first)},
                             {"to", subset_of(pair.second)},
                             {"matrix", matrix_to_json(m)}});
    j["restrictions"] = rests;
    return j;
}

// ---------------------------------------------------------------------------
// Polynomial text syntax: variables "x1@g" (degree vector comma separated),
// products by juxtaposition with "*", "[f,g]" commutators, "s4(x1,...)"
// standard polynomials, "+"/"-" and rational coefficients.
// ---------------------------------------------------------------------------

namespace detail {

struct PolyParser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw StructuralError("polynomial syntax error at offset " + std::to_string(pos) + ": " +
                              what);
    }

    long long parse_int() {
        skip_ws();
        std::size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoll(std::string(src.substr(start, pos - start)));
    }

    GradedVariable parse_variable() {
        skip_ws();
        if (peek() != 'x') fail("expected variable");
        ++pos;
        const int index = static_cast<int>(parse_int());
        GroupElem degree;
        if (pos < src.size() && src[pos] == '@') {
            ++pos;
            degree.push_back(parse_int());
            while (pos < src.size() && src[pos] == ',') {
                ++pos;
                degree.push_back(parse_int());
            }
        }
        return {index, degree};
    }

    GradedPolynomial parse_factor() {
        skip_ws();
        if (peek() == '(') {
            ++pos;
            GradedPolynomial inner = parse_expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (peek() == '[') {
            ++pos;
            GradedPolynomial lhs = parse_expr();
            if (!eat(',')) fail("expected , in commutator");
            GradedPolynomial rhs = parse_expr();
            if (!eat(']')) fail("expected ]");
            return commutator(lhs, rhs);
        }
        if (peek() == 's') {
            ++pos;
            const int k = static_cast<int>(parse_int());
            if (!eat('(')) fail("expected ( after standard polynomial");
            std::vector<GradedVariable> vars;
            vars.push_back(parse_variable());
            while (eat(',')) vars.push_back(parse_variable());
            if (!eat(')')) fail("expected )");
            if (static_cast<int>(vars.size()) != k) fail("standard polynomial arity mismatch");
            // alternating sum over the listed variables
            std::vector<int> perm(k);
            for (int i = 0; i < k; ++i) perm[i] = i;
            GradedPolynomial out;
            do {
                int inv = 0;
                for (int i = 0; i < k; ++i)
                    for (int j = i + 1; j < k; ++j)
                        if (perm[i] > perm[j]) ++inv;
                Word w;
                for (int i = 0; i < k; ++i) w.push_back(vars[perm[i]]);
                out.add_term(w, inv % 2 == 0 ? Rat(1) : Rat(-1));
            } while (std::next_permutation(perm.begin(), perm.end()));
            return out;
        }
        if (peek() == 'x') return GradedPolynomial::monomial(Word{parse_variable()});
        // rational literal
        skip_ws();
        std::size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '/'))
            ++pos;
        if (pos == start) fail("expected factor");
        return GradedPolynomial::monomial(Word{}, rat_from_string(src.substr(start, pos - start)));
    }

    GradedPolynomial parse_term() {
        GradedPolynomial out = parse_factor();
        while (true) {
            skip_ws();
            if (eat('*')) {
                out = out * parse_factor();
            } else if (peek() == 'x' || peek() == '[' || peek() == '(' || peek() == 's') {
                out = out * parse_factor();  // juxtaposition
            } else {
                break;
            }
        }
        return out;
    }

    GradedPolynomial parse_expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            ++pos;
            neg = true;
        } else if (peek() == '+') {
            ++pos;
        }
        GradedPolynomial out = parse_term();
        if (neg) out = out.scaled(Rat(-1));
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos;
                out = out + parse_term();
            } else if (peek() == '-') {
                ++pos;
                out = out - parse_term();
            } else {
                break;
            }
        }
        return out;
    }
};

}  // namespace detail

inline GradedPolynomial parse_polynomial(std::string_view text) {
    detail::PolyParser p{text};
    GradedPolynomial out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return out;
}

// ---------------------------------------------------------------------------
// Forms text syntax: "x1^2*x2 dx1^dx3" per term, "+"/"-" between terms.
// ---------------------------------------------------------------------------

inline PolyForm parse_form(const FormsArena& arena, std::string_view text) {
    PolyForm out;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto parse_uint = [&]() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw StructuralError("form syntax: expected integer");
        return std::stoi(std::string(text.substr(start, pos - start)));
    };
    skip();
    while (pos < text.size()) {
        Rat sign(1);
        if (text[pos] == '+') {
            ++pos;
        } else if (text[pos] == '-') {
            sign = -1;
            ++pos;
        }
        skip();
        Rat coeff(1);
        if (pos < text.size() &&
            (std::isdigit(static_cast<unsigned char>(text[pos])))) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
                ++pos;
            coeff = rat_from_string(text.substr(start, pos - start));
        }
        FormMonomial m;
        m.exps.resize(arena.nvars, 0);
        while (true) {
            skip();
            if (pos + 1 < text.size() && text[pos] == 'd' && text[pos + 1] == 'x') {
                pos += 2;
                const int i = parse_uint();
                if (i < 1 || i > arena.nvars) throw StructuralError("form variable out of range");
                if (m.mask & (1u << (i - 1))) throw StructuralError("repeated dx factor");
                m.mask |= 1u << (i - 1);
                skip();
                if (pos < text.size() && text[pos] == '^') { ++pos; continue; }
                continue;
            }
            if (pos < text.size() && text[pos] == 'x') {
                ++pos;
                const int i = parse_uint();
                if (i < 1 || i > arena.nvars) throw StructuralError("form variable out of range");
                int e = 1;
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    e = parse_uint();
                }
                m.exps[i - 1] += e;
                skip();
                if (pos < text.size() && text[pos] == '*') ++pos;
                continue;
            }
            break;
        }
        if (total_degree(m) > arena.poly_cap)
            throw FormCapError("form term exceeds the polynomial cap");
        add_form_term(out, m, sign * coeff);
        skip();
    }
    return out;
}

}  // namespace pivar
