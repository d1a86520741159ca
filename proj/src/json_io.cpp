#include "l2lab/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "l2lab/error.hpp"

namespace l2lab {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(where + ": missing \"" + key + "\"");
    return *it;
}

int64_t need_int(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number_integer()) throw ValidationError(where + ": \"" + key + "\" must be an integer");
    return v.get<int64_t>();
}

Rational parse_rational_pair(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ValidationError(where + ": rational must be a [numerator, denominator] integer pair");
    int64_t num = j[0].get<int64_t>(), den = j[1].get<int64_t>();
    if (den == 0) throw ValidationError(where + ": zero denominator");
    Rational r = Rational(static_cast<long>(num)) / Rational(static_cast<long>(den));
    r.canonicalize();
    return r;
}

ExactC parse_coeff(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": coeff must be an object with \"re\" and \"im\"");
    ExactC out;
    out.re = parse_rational_pair(need(j, "re", where), where + ".re");
    if (j.contains("im")) out.im = parse_rational_pair(j["im"], where + ".im");
    return out;
}

}  // namespace

Group parse_group(const Json& j) {
    if (!j.is_object()) throw ValidationError("group descriptor must be an object");
    const Json& fam = need(j, "family", "group");
    if (!fam.is_string()) throw ValidationError("group: \"family\" must be a string");
    std::string f = fam.get<std::string>();
    if (f == "free") {
        int64_t rank = need_int(j, "rank", "group(free)");
        std::vector<std::string> names;
        if (j.contains("generators")) {
            const Json& g = j["generators"];
            if (!g.is_array()) throw ValidationError("group(free): \"generators\" must be an array");
            for (const auto& n : g) {
                if (!n.is_string()) throw ValidationError("group(free): generator names must be strings");
                names.push_back(n.get<std::string>());
            }
            if (static_cast<int64_t>(names.size()) != rank)
                throw ValidationError("group(free): generator count differs from rank");
        }
        return Group::free_group(static_cast<int>(rank), std::move(names));
    }
    if (f == "zn") {
        return Group::free_abelian(static_cast<int>(need_int(j, "n", "group(zn)")));
    }
    if (f == "lamplighter") {
        return Group::lamplighter();
    }
    if (f == "finite") {
        int64_t order = need_int(j, "order", "group(finite)");
        const Json& t = need(j, "table", "group(finite)");
        if (!t.is_array() || static_cast<int64_t>(t.size()) != order)
            throw ValidationError("group(finite): \"table\" must be an order x order array");
        std::vector<std::vector<int>> table;
        for (const auto& row : t) {
            if (!row.is_array() || static_cast<int64_t>(row.size()) != order)
                throw ValidationError("group(finite): \"table\" must be an order x order array");
            std::vector<int> r;
            for (const auto& v : row) {
                if (!v.is_number_integer()) throw ValidationError("group(finite): table entries must be integers");
                r.push_back(v.get<int>());
            }
            table.push_back(std::move(r));
        }
        return Group::finite(std::move(table));
    }
    if (f == "direct_product" || f == "free_product") {
        const Json& fs = need(j, "factors", "group(" + f + ")");
        if (!fs.is_array() || fs.size() < 2)
            throw ValidationError("group(" + f + "): \"factors\" needs at least two entries");
        std::vector<Group> factors;
        for (const auto& sub : fs) factors.push_back(parse_group(sub));
        return f == "direct_product" ? Group::direct_product(std::move(factors))
                                     : Group::free_product(std::move(factors));
    }
    throw ValidationError("group: unknown family \"" + f + "\"");
}

GroupElement parse_word(const Group& g, const Json& j) {
    switch (g.family()) {
        case Family::finite: {
            if (!j.is_number_integer()) throw ValidationError("word: finite group words are element indices");
            GroupElement e(j.get<int64_t>());
            validate_element(g, e);
            return e;
        }
        case Family::free_abelian: {
            if (!j.is_array()) throw ValidationError("word: free abelian words are integer vectors");
            GroupElement::ZnWord w;
            for (const auto& v : j) {
                if (!v.is_number_integer()) throw ValidationError("word: exponents must be integers");
                w.push_back(v.get<int64_t>());
            }
            GroupElement e(std::move(w));
            validate_element(g, e);
            return e;
        }
        case Family::free_group: {
            if (!j.is_array()) throw ValidationError("word: free group words are signed index lists");
            GroupElement acc = identity(g);
            for (const auto& v : j) {
                if (!v.is_number_integer() || v.get<int64_t>() == 0)
                    throw ValidationError("word: free group letters are non-zero signed indices");
                int64_t letter = v.get<int64_t>();
                if (letter > 127 || letter < -127) throw ValidationError("word: letter index out of range");
                GroupElement step{GroupElement::FreeWord(1, static_cast<char>(letter))};
                validate_element(g, step);
                acc = compose(g, acc, step);
            }
            return acc;
        }
        case Family::lamplighter: {
            if (!j.is_object()) throw ValidationError("word: lamplighter words are {\"lamps\":[...],\"shift\":m}");
            const Json& lamps = need(j, "lamps", "word(lamplighter)");
            int64_t shift = need_int(j, "shift", "word(lamplighter)");
            if (!lamps.is_array()) throw ValidationError("word: \"lamps\" must be an array of positions");
            std::vector<int64_t> pos;
            for (const auto& v : lamps) {
                if (!v.is_number_integer()) throw ValidationError("word: lamp positions must be integers");
                pos.push_back(v.get<int64_t>());
            }
            std::sort(pos.begin(), pos.end());
            for (size_t i = 0; i + 1 < pos.size(); ++i)
                if (pos[i] == pos[i + 1]) throw ValidationError("word: duplicate lamp position");
            LampElem le;
            for (int64_t p : pos) {
                if (p < -120 || p > 120) throw ValidationError("word: lamp position out of range");
                le.lamps.push_back(static_cast<char>(p));
            }
            if (shift < -120 || shift > 120) throw ValidationError("word: shift out of range");
            le.shift = static_cast<int32_t>(shift);
            GroupElement e(std::move(le));
            validate_element(g, e);
            return e;
        }
        case Family::direct_product: {
            const auto& factors = g.factors_data().factors;
            if (!j.is_array() || j.size() != factors.size())
                throw ValidationError("word: direct product words are one word per factor");
            GroupElement::ProdWord w;
            for (size_t i = 0; i < factors.size(); ++i) w.push_back(parse_word(factors[i], j[i]));
            GroupElement e(std::move(w));
            validate_element(g, e);
            return e;
        }
        case Family::free_product: {
            const auto& factors = g.factors_data().factors;
            if (!j.is_array()) throw ValidationError("word: free product words are [factor, word] pair lists");
            GroupElement acc = identity(g);
            for (const auto& syl : j) {
                if (!syl.is_array() || syl.size() != 2 || !syl[0].is_number_integer())
                    throw ValidationError("word: free product syllables are [factor, word] pairs");
                int64_t fi = syl[0].get<int64_t>();
                if (fi < 0 || fi >= static_cast<int64_t>(factors.size()))
                    throw ValidationError("word: factor index out of range");
                GroupElement part = parse_word(factors[fi], syl[1]);
                if (is_identity(factors[fi], part)) continue;
                GroupElement::FPWord one;
                one.push_back(FPSyllable{static_cast<int32_t>(fi), std::move(part)});
                GroupElement step{std::move(one)};
                validate_element(g, step);
                acc = compose(g, acc, step);
            }
            return acc;
        }
    }
    throw std::logic_error("unhandled family in parse_word");
}

RElem<ExactC> parse_terms(const Group& g, const Json& j) {
    if (!j.is_array()) throw ValidationError("entry: term list must be an array");
    std::vector<std::pair<GroupElement, ExactC>> terms;
    for (const auto& t : j) {
        if (!t.is_object()) throw ValidationError("entry: each term must be an object");
        ExactC c = parse_coeff(need(t, "coeff", "term"), "term.coeff");
        GroupElement w = parse_word(g, need(t, "word", "term"));
        terms.emplace_back(std::move(w), std::move(c));
    }
    return r_elem(g, std::move(terms));
}

GRMat<ExactC> parse_matrix(const Json& j, const Group* fallback_group) {
    if (!j.is_object()) throw ValidationError("matrix: must be an object");
    Group g;
    if (j.contains("group")) g = parse_group(j["group"]);
    else if (fallback_group) g = *fallback_group;
    else throw ValidationError("matrix: missing \"group\"");
    int64_t rows = need_int(j, "rows", "matrix");
    int64_t cols = need_int(j, "cols", "matrix");
    if (rows < 0 || cols < 0 || rows > 4096 || cols > 4096)
        throw ValidationError("matrix: size out of range");
    const Json& entries = need(j, "entries", "matrix");
    if (!entries.is_array() || static_cast<int64_t>(entries.size()) != rows)
        throw ValidationError("matrix: \"entries\" must have one row array per row");
    GRMat<ExactC> m = mat_zero<ExactC>(g, static_cast<int>(rows), static_cast<int>(cols));
    for (int64_t i = 0; i < rows; ++i) {
        const Json& row = entries[i];
        if (!row.is_array() || static_cast<int64_t>(row.size()) != cols)
            throw ValidationError("matrix: row " + std::to_string(i) + " must have one term list per column");
        for (int64_t jj = 0; jj < cols; ++jj)
            m.at(static_cast<int>(i), static_cast<int>(jj)) = parse_terms(g, row[jj]);
    }
    return m;
}

ChainComplex<ExactC> parse_complex(const Json& j) {
    if (!j.is_object()) throw ValidationError("complex: must be an object");
    Group g = parse_group(need(j, "group", "complex"));
    const Json& ranks = need(j, "ranks", "complex");
    if (!ranks.is_array() || ranks.empty()) throw ValidationError("complex: \"ranks\" must be a non-empty array");
    ChainComplex<ExactC> cc;
    cc.g = g;
    for (const auto& r : ranks) {
        if (!r.is_number_integer() || r.get<int64_t>() < 0)
            throw ValidationError("complex: ranks must be non-negative integers");
        cc.ranks.push_back(r.get<int>());
    }
    const Json& diffs = need(j, "differentials", "complex");
    if (!diffs.is_array() || diffs.size() + 1 != cc.ranks.size())
        throw ValidationError("complex: need one differential per positive degree");
    for (const auto& d : diffs) {
        GRMat<ExactC> m = parse_matrix(d, &g);
        if (!(m.g == g)) throw ValidationError("complex: differential group differs from the complex group");
        cc.diff.push_back(std::move(m));
    }
    return cc;
}

std::vector<Cell> parse_cells(const Json& j) {
    if (!j.is_array()) throw ValidationError("cells: must be an array");
    std::vector<Cell> out;
    for (const auto& c : j) {
        if (!c.is_object()) throw ValidationError("cells: each cell must be an object");
        Cell cell;
        cell.dim = static_cast<int>(need_int(c, "dim", "cell"));
        const Json& iso = need(c, "isotropy", "cell");
        if (iso.is_string() && iso.get<std::string>() == "inf") {
            cell.isotropy.reset();
        } else if (iso.is_number_integer() && iso.get<int64_t>() > 0) {
            cell.isotropy = static_cast<uint64_t>(iso.get<int64_t>());
        } else {
            throw ValidationError("cell: \"isotropy\" must be a positive integer or \"inf\"");
        }
        out.push_back(cell);
    }
    return out;
}

Json group_json(const Group& g) {
    Json j;
    switch (g.family()) {
        case Family::finite: {
            j["family"] = "finite";
            j["order"] = g.finite_data().order;
            j["table"] = g.finite_data().table;
            break;
        }
        case Family::free_abelian: {
            j["family"] = "zn";
            j["n"] = g.zn_data().n;
            break;
        }
        case Family::free_group: {
            j["family"] = "free";
            j["rank"] = g.free_data().rank;
            j["generators"] = g.free_data().names;
            break;
        }
        case Family::lamplighter: {
            j["family"] = "lamplighter";
            break;
        }
        case Family::direct_product:
        case Family::free_product: {
            j["family"] = g.family() == Family::direct_product ? "direct_product" : "free_product";
            Json fs = Json::array();
            for (const auto& f : g.factors_data().factors) fs.push_back(group_json(f));
            j["factors"] = std::move(fs);
            break;
        }
    }
    return j;
}

Json word_json(const Group& g, const GroupElement& e) {
    switch (g.family()) {
        case Family::finite:
            return Json(std::get<int64_t>(e.v));
        case Family::free_abelian:
            return Json(std::get<GroupElement::ZnWord>(e.v));
        case Family::free_group: {
            Json j = Json::array();
            for (char c : std::get<GroupElement::FreeWord>(e.v)) j.push_back(static_cast<int>(static_cast<int8_t>(c)));
            return j;
        }
        case Family::lamplighter: {
            const auto& le = std::get<LampElem>(e.v);
            Json j;
            Json lamps = Json::array();
            for (char c : le.lamps) lamps.push_back(static_cast<int>(static_cast<int8_t>(c)));
            j["lamps"] = std::move(lamps);
            j["shift"] = le.shift;
            return j;
        }
        case Family::direct_product: {
            const auto& factors = g.factors_data().factors;
            const auto& w = std::get<GroupElement::ProdWord>(e.v);
            Json j = Json::array();
            for (size_t i = 0; i < factors.size(); ++i) j.push_back(word_json(factors[i], w[i]));
            return j;
        }
        case Family::free_product: {
            const auto& factors = g.factors_data().factors;
            Json j = Json::array();
            for (const auto& syl : std::get<GroupElement::FPWord>(e.v)) {
                Json pair = Json::array();
                pair.push_back(syl.factor);
                pair.push_back(word_json(factors[syl.factor], syl.g));
                j.push_back(std::move(pair));
            }
            return j;
        }
    }
    throw std::logic_error("unhandled family in word_json");
}

namespace {

Json rational_pair_json(const Rational& r) {
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p())
        throw ValidationError("coefficient exceeds the serializable integer range");
    return Json::array({r.get_num().get_si(), r.get_den().get_si()});
}

}  // namespace

Json terms_json(const Group& g, const RElem<ExactC>& u) {
    Json j = Json::array();
    for (const auto& [e, c] : u.terms) {
        Json t;
        Json coeff;
        coeff["re"] = rational_pair_json(c.re);
        coeff["im"] = rational_pair_json(c.im);
        t["coeff"] = std::move(coeff);
        t["word"] = word_json(g, e);
        j.push_back(std::move(t));
    }
    return j;
}

Json matrix_json(const GRMat<ExactC>& m) {
    Json j;
    j["group"] = group_json(m.g);
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(terms_json(m.g, m.at(i, c)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("JSON parse error in " + path + ": " + e.what());
    }
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

Json rational_json(const Rational& r) { return Json(rational_str(r)); }

}  // namespace l2lab
