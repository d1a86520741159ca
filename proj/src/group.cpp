#include "l2lab/group.hpp"

#include <algorithm>
#include <sstream>

namespace l2lab {

namespace {

constexpr int kMaxLetter = 120;  // int8 headroom for free letters and lamp positions

std::shared_ptr<const std::variant<FiniteData, ZnData, FreeData, LampData, FactorsData>> wrap(
    std::variant<FiniteData, ZnData, FreeData, LampData, FactorsData> d) {
    return std::make_shared<const std::variant<FiniteData, ZnData, FreeData, LampData, FactorsData>>(
        std::move(d));
}

}  // namespace

Group Group::finite(std::vector<std::vector<int>> table) {
    FiniteData d;
    d.order = static_cast<int>(table.size());
    if (d.order == 0) throw ValidationError("finite group: empty multiplication table");
    for (const auto& row : table)
        if (static_cast<int>(row.size()) != d.order)
            throw ValidationError("finite group: table is not square");
    for (const auto& row : table)
        for (int v : row)
            if (v < 0 || v >= d.order) throw ValidationError("finite group: table entry out of range");
    d.table = std::move(table);

    // locate the two-sided identity
    d.identity = -1;
    for (int e = 0; e < d.order; ++e) {
        bool ok = true;
        for (int x = 0; x < d.order && ok; ++x)
            ok = d.table[e][x] == x && d.table[x][e] == x;
        if (ok) { d.identity = e; break; }
    }
    if (d.identity < 0) throw ValidationError("finite group: table has no identity element");

    d.inverse.assign(d.order, -1);
    for (int x = 0; x < d.order; ++x) {
        for (int y = 0; y < d.order; ++y) {
            if (d.table[x][y] == d.identity && d.table[y][x] == d.identity) { d.inverse[x] = y; break; }
        }
        if (d.inverse[x] < 0) throw ValidationError("finite group: element without inverse");
    }

    // spot-check associativity on a fixed grid; full check is cubic and the
    // tables here are small, so just do it when affordable
    if (d.order <= 64) {
        for (int a = 0; a < d.order; ++a)
            for (int b = 0; b < d.order; ++b)
                for (int c = 0; c < d.order; ++c)
                    if (d.table[d.table[a][b]][c] != d.table[a][d.table[b][c]])
                        throw ValidationError("finite group: table is not associative");
    }

    Group g;
    g.family_ = Family::finite;
    g.data_ = wrap(std::move(d));
    return g;
}

Group Group::free_abelian(int n) {
    if (n < 1 || n > 16) throw ValidationError("free abelian rank must be in [1, 16]");
    Group g;
    g.family_ = Family::free_abelian;
    g.data_ = wrap(ZnData{n});
    return g;
}

Group Group::free_group(int rank, std::vector<std::string> names) {
    if (rank < 1 || rank > kMaxLetter) throw ValidationError("free group rank out of range");
    FreeData d;
    d.rank = rank;
    if (names.empty()) {
        for (int i = 0; i < rank; ++i) d.names.push_back(std::string(1, static_cast<char>('a' + i % 26)));
    } else {
        if (static_cast<int>(names.size()) != rank)
            throw ValidationError("free group: generator list does not match rank");
        d.names = std::move(names);
    }
    Group g;
    g.family_ = Family::free_group;
    g.data_ = wrap(std::move(d));
    return g;
}

Group Group::lamplighter() {
    Group g;
    g.family_ = Family::lamplighter;
    g.data_ = wrap(LampData{});
    return g;
}

Group Group::direct_product(std::vector<Group> factors) {
    if (factors.size() < 2) throw ValidationError("direct product needs at least two factors");
    Group g;
    g.family_ = Family::direct_product;
    g.data_ = wrap(FactorsData{std::move(factors)});
    return g;
}

Group Group::free_product(std::vector<Group> factors) {
    if (factors.size() < 2) throw ValidationError("free product needs at least two factors");
    for (const auto& f : factors)
        if (f.family() == Family::free_product)
            throw ValidationError("free product factors must not themselves be free products; flatten first");
    Group g;
    g.family_ = Family::free_product;
    g.data_ = wrap(FactorsData{std::move(factors)});
    return g;
}

bool Group::operator==(const Group& o) const {
    if (family_ != o.family_) return false;
    if (data_ == o.data_) return true;
    switch (family_) {
        case Family::finite: {
            const auto& a = finite_data();
            const auto& b = o.finite_data();
            return a.table == b.table;
        }
        case Family::free_abelian:
            return zn_data().n == o.zn_data().n;
        case Family::free_group:
            return free_data().rank == o.free_data().rank;
        case Family::lamplighter:
            return true;
        case Family::direct_product:
        case Family::free_product: {
            const auto& a = factors_data().factors;
            const auto& b = o.factors_data().factors;
            if (a.size() != b.size()) return false;
            for (size_t i = 0; i < a.size(); ++i)
                if (!(a[i] == b[i])) return false;
            return true;
        }
    }
    return false;
}

bool GroupElement::operator==(const GroupElement& o) const { return v == o.v; }

GroupElement identity(const Group& g) {
    switch (g.family()) {
        case Family::finite: return GroupElement(static_cast<int64_t>(g.finite_data().identity));
        case Family::free_abelian: return GroupElement(GroupElement::ZnWord(g.zn_data().n, 0));
        case Family::free_group: return GroupElement(GroupElement::FreeWord{});
        case Family::lamplighter: return GroupElement(LampElem{});
        case Family::direct_product: {
            GroupElement::ProdWord w;
            for (const auto& f : g.factors_data().factors) w.push_back(identity(f));
            return GroupElement(std::move(w));
        }
        case Family::free_product: return GroupElement(GroupElement::FPWord{});
    }
    throw std::logic_error("unreachable family");
}

bool is_identity(const Group& g, const GroupElement& x) { return x == identity(g); }

namespace {

// symmetric difference of two sorted lamp strings, the second shifted by s
std::string lamp_symdiff(const std::string& a, const std::string& b, int s) {
    std::string out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int pa = static_cast<int8_t>(a[i]);
        int pb = static_cast<int8_t>(b[j]) + s;
        if (pa < pb) out.push_back(static_cast<char>(pa)), ++i;
        else if (pb < pa) out.push_back(static_cast<char>(pb)), ++j;
        else ++i, ++j;  // lamp toggled twice
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(static_cast<char>(static_cast<int8_t>(b[j]) + s));
    return out;
}

void check_lamp_range(int pos) {
    if (pos < -kMaxLetter || pos > kMaxLetter)
        throw ResourceError("lamplighter element outside the supported position range");
}

GroupElement compose_fp(const Group& g, const GroupElement& a, const GroupElement& b);

}  // namespace

GroupElement compose(const Group& g, const GroupElement& a, const GroupElement& b) {
    switch (g.family()) {
        case Family::finite: {
            const auto& d = g.finite_data();
            return GroupElement(
                static_cast<int64_t>(d.table[std::get<int64_t>(a.v)][std::get<int64_t>(b.v)]));
        }
        case Family::free_abelian: {
            const auto& x = std::get<GroupElement::ZnWord>(a.v);
            const auto& y = std::get<GroupElement::ZnWord>(b.v);
            GroupElement::ZnWord out(x.size());
            for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
            return GroupElement(std::move(out));
        }
        case Family::free_group: {
            const auto& x = std::get<GroupElement::FreeWord>(a.v);
            const auto& y = std::get<GroupElement::FreeWord>(b.v);
            size_t i = x.size(), j = 0;
            while (i > 0 && j < y.size() &&
                   static_cast<int8_t>(x[i - 1]) == -static_cast<int8_t>(y[j]))
                --i, ++j;
            GroupElement::FreeWord out;
            out.reserve(i + y.size() - j);
            out.append(x, 0, i);
            out.append(y, j, y.size() - j);
            return GroupElement(std::move(out));
        }
        case Family::lamplighter: {
            const auto& x = std::get<LampElem>(a.v);
            const auto& y = std::get<LampElem>(b.v);
            if (!y.lamps.empty()) {
                check_lamp_range(static_cast<int8_t>(y.lamps.front()) + x.shift);
                check_lamp_range(static_cast<int8_t>(y.lamps.back()) + x.shift);
            }
            LampElem out;
            out.lamps = lamp_symdiff(x.lamps, y.lamps, x.shift);
            out.shift = x.shift + y.shift;
            check_lamp_range(out.shift);
            return GroupElement(std::move(out));
        }
        case Family::direct_product: {
            const auto& fs = g.factors_data().factors;
            const auto& x = std::get<GroupElement::ProdWord>(a.v);
            const auto& y = std::get<GroupElement::ProdWord>(b.v);
            GroupElement::ProdWord out;
            out.reserve(fs.size());
            for (size_t i = 0; i < fs.size(); ++i) out.push_back(compose(fs[i], x[i], y[i]));
            return GroupElement(std::move(out));
        }
        case Family::free_product:
            return compose_fp(g, a, b);
    }
    throw std::logic_error("unreachable family");
}

namespace {

GroupElement compose_fp(const Group& g, const GroupElement& a, const GroupElement& b) {
    const auto& fs = g.factors_data().factors;
    const auto& x = std::get<GroupElement::FPWord>(a.v);
    const auto& y = std::get<GroupElement::FPWord>(b.v);
    GroupElement::FPWord out = x;
    for (const auto& syl : y) {
        if (!out.empty() && out.back().factor == syl.factor) {
            GroupElement merged = compose(fs[syl.factor], out.back().g, syl.g);
            if (is_identity(fs[syl.factor], merged)) out.pop_back();
            else out.back().g = std::move(merged);
        } else {
            out.push_back(syl);
        }
    }
    return GroupElement(std::move(out));
}

}  // namespace

GroupElement invert(const Group& g, const GroupElement& a) {
    switch (g.family()) {
        case Family::finite:
            return GroupElement(static_cast<int64_t>(g.finite_data().inverse[std::get<int64_t>(a.v)]));
        case Family::free_abelian: {
            const auto& x = std::get<GroupElement::ZnWord>(a.v);
            GroupElement::ZnWord out(x.size());
            for (size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
            return GroupElement(std::move(out));
        }
        case Family::free_group: {
            const auto& x = std::get<GroupElement::FreeWord>(a.v);
            GroupElement::FreeWord out;
            out.reserve(x.size());
            for (auto it = x.rbegin(); it != x.rend(); ++it)
                out.push_back(static_cast<char>(-static_cast<int8_t>(*it)));
            return GroupElement(std::move(out));
        }
        case Family::lamplighter: {
            // (S, m)^{-1} = (S - m, -m)
            const auto& x = std::get<LampElem>(a.v);
            LampElem out;
            out.shift = -x.shift;
            out.lamps.reserve(x.lamps.size());
            for (char c : x.lamps) {
                int p = static_cast<int8_t>(c) - x.shift;
                check_lamp_range(p);
                out.lamps.push_back(static_cast<char>(p));
            }
            return GroupElement(std::move(out));
        }
        case Family::direct_product: {
            const auto& fs = g.factors_data().factors;
            const auto& x = std::get<GroupElement::ProdWord>(a.v);
            GroupElement::ProdWord out;
            out.reserve(fs.size());
            for (size_t i = 0; i < fs.size(); ++i) out.push_back(invert(fs[i], x[i]));
            return GroupElement(std::move(out));
        }
        case Family::free_product: {
            const auto& fs = g.factors_data().factors;
            const auto& x = std::get<GroupElement::FPWord>(a.v);
            GroupElement::FPWord out;
            out.reserve(x.size());
            for (auto it = x.rbegin(); it != x.rend(); ++it)
                out.push_back({it->factor, invert(fs[it->factor], it->g)});
            return GroupElement(std::move(out));
        }
    }
    throw std::logic_error("unreachable family");
}

void validate_element(const Group& g, const GroupElement& x) {
    switch (g.family()) {
        case Family::finite: {
            if (!std::holds_alternative<int64_t>(x.v))
                throw ValidationError("finite element must be an index");
            int64_t i = std::get<int64_t>(x.v);
            if (i < 0 || i >= g.finite_data().order)
                throw ValidationError("finite element index out of range");
            return;
        }
        case Family::free_abelian: {
            if (!std::holds_alternative<GroupElement::ZnWord>(x.v))
                throw ValidationError("free abelian element must be an integer vector");
            if (static_cast<int>(std::get<GroupElement::ZnWord>(x.v).size()) != g.zn_data().n)
                throw ValidationError("free abelian element has wrong length");
            return;
        }
        case Family::free_group: {
            if (!std::holds_alternative<GroupElement::FreeWord>(x.v))
                throw ValidationError("free group element must be a letter string");
            const auto& w = std::get<GroupElement::FreeWord>(x.v);
            for (size_t i = 0; i < w.size(); ++i) {
                int l = static_cast<int8_t>(w[i]);
                if (l == 0 || std::abs(l) > g.free_data().rank)
                    throw ValidationError("free word letter out of range");
                if (i + 1 < w.size() && static_cast<int8_t>(w[i + 1]) == -l)
                    throw ValidationError("free word is not reduced");
            }
            return;
        }
        case Family::lamplighter: {
            if (!std::holds_alternative<LampElem>(x.v))
                throw ValidationError("lamplighter element must be lamps+shift");
            const auto& e = std::get<LampElem>(x.v);
            for (size_t i = 0; i + 1 < e.lamps.size(); ++i)
                if (static_cast<int8_t>(e.lamps[i]) >= static_cast<int8_t>(e.lamps[i + 1]))
                    throw ValidationError("lamp positions must be strictly increasing");
            return;
        }
        case Family::direct_product: {
            if (!std::holds_alternative<GroupElement::ProdWord>(x.v))
                throw ValidationError("direct product element must be a tuple");
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::ProdWord>(x.v);
            if (w.size() != fs.size()) throw ValidationError("direct product tuple has wrong arity");
            for (size_t i = 0; i < fs.size(); ++i) validate_element(fs[i], w[i]);
            return;
        }
        case Family::free_product: {
            if (!std::holds_alternative<GroupElement::FPWord>(x.v))
                throw ValidationError("free product element must be a syllable list");
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::FPWord>(x.v);
            for (size_t i = 0; i < w.size(); ++i) {
                if (w[i].factor < 0 || w[i].factor >= static_cast<int32_t>(fs.size()))
                    throw ValidationError("free product syllable factor out of range");
                validate_element(fs[w[i].factor], w[i].g);
                if (is_identity(fs[w[i].factor], w[i].g))
                    throw ValidationError("free product syllable must not be the identity");
                if (i + 1 < w.size() && w[i + 1].factor == w[i].factor)
                    throw ValidationError("free product syllables must alternate factors");
            }
            return;
        }
    }
}

namespace {

int order3(const GroupElement& a, const GroupElement& b);  // -1 / 0 / +1

template <class V>
int cmp_seq(const V& a, const V& b, int (*cmp)(const typename V::value_type&, const typename V::value_type&)) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

int cmp_i64(const int64_t& a, const int64_t& b) { return a < b ? -1 : (a > b ? 1 : 0); }
int cmp_elem(const GroupElement& a, const GroupElement& b) { return order3(a, b); }
int cmp_syl(const FPSyllable& a, const FPSyllable& b) {
    if (a.factor != b.factor) return a.factor < b.factor ? -1 : 1;
    return order3(a.g, b.g);
}

int order3(const GroupElement& a, const GroupElement& b) {
    if (a.v.index() != b.v.index()) return a.v.index() < b.v.index() ? -1 : 1;
    switch (a.v.index()) {
        case 0: return cmp_i64(std::get<int64_t>(a.v), std::get<int64_t>(b.v));
        case 1: return cmp_seq(std::get<GroupElement::ZnWord>(a.v), std::get<GroupElement::ZnWord>(b.v), cmp_i64);
        case 2: {
            const auto& x = std::get<GroupElement::FreeWord>(a.v);
            const auto& y = std::get<GroupElement::FreeWord>(b.v);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            int c = x.compare(y);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case 3: {
            const auto& x = std::get<LampElem>(a.v);
            const auto& y = std::get<LampElem>(b.v);
            if (x.shift != y.shift) return x.shift < y.shift ? -1 : 1;
            if (x.lamps.size() != y.lamps.size()) return x.lamps.size() < y.lamps.size() ? -1 : 1;
            int c = x.lamps.compare(y.lamps);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case 4: return cmp_seq(std::get<GroupElement::ProdWord>(a.v), std::get<GroupElement::ProdWord>(b.v), cmp_elem);
        case 5: return cmp_seq(std::get<GroupElement::FPWord>(a.v), std::get<GroupElement::FPWord>(b.v), cmp_syl);
    }
    return 0;
}

inline void hash_mix(size_t& h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

}  // namespace

bool element_less(const GroupElement& a, const GroupElement& b) { return order3(a, b) < 0; }

size_t element_hash(const GroupElement& x) {
    size_t h = x.v.index() * 0x100000001b3ull;
    switch (x.v.index()) {
        case 0: hash_mix(h, static_cast<uint64_t>(std::get<int64_t>(x.v))); break;
        case 1:
            for (int64_t c : std::get<GroupElement::ZnWord>(x.v)) hash_mix(h, static_cast<uint64_t>(c));
            break;
        case 2:
            h = std::hash<std::string>{}(std::get<GroupElement::FreeWord>(x.v)) ^ (h << 1);
            break;
        case 3: {
            const auto& e = std::get<LampElem>(x.v);
            h = std::hash<std::string>{}(e.lamps);
            hash_mix(h, static_cast<uint64_t>(static_cast<int64_t>(e.shift)));
            break;
        }
        case 4:
            for (const auto& c : std::get<GroupElement::ProdWord>(x.v)) hash_mix(h, element_hash(c));
            break;
        case 5:
            for (const auto& s : std::get<GroupElement::FPWord>(x.v)) {
                hash_mix(h, static_cast<uint64_t>(s.factor));
                hash_mix(h, element_hash(s.g));
            }
            break;
    }
    return h;
}

int64_t word_radius(const Group& g, const GroupElement& x) {
    switch (g.family()) {
        case Family::finite: return 0;
        case Family::free_abelian: {
            int64_t r = 0;
            for (int64_t c : std::get<GroupElement::ZnWord>(x.v)) r = std::max(r, std::abs(c));
            return r;
        }
        case Family::free_group: return static_cast<int64_t>(std::get<GroupElement::FreeWord>(x.v).size());
        case Family::lamplighter: {
            const auto& e = std::get<LampElem>(x.v);
            int64_t r = std::abs(static_cast<int64_t>(e.shift));
            for (char c : e.lamps) r = std::max(r, std::abs(static_cast<int64_t>(static_cast<int8_t>(c))));
            return r;
        }
        case Family::direct_product: {
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::ProdWord>(x.v);
            int64_t r = 0;
            for (size_t i = 0; i < fs.size(); ++i) r = std::max(r, word_radius(fs[i], w[i]));
            return r;
        }
        case Family::free_product: {
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::FPWord>(x.v);
            int64_t r = 0;
            for (const auto& s : w) r += std::max<int64_t>(1, word_radius(fs[s.factor], s.g));
            return r;
        }
    }
    return 0;
}

std::string element_str(const Group& g, const GroupElement& x) {
    std::ostringstream os;
    switch (g.family()) {
        case Family::finite:
            os << "g" << std::get<int64_t>(x.v);
            break;
        case Family::free_abelian: {
            os << "(";
            const auto& w = std::get<GroupElement::ZnWord>(x.v);
            for (size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
            os << ")";
            break;
        }
        case Family::free_group: {
            const auto& w = std::get<GroupElement::FreeWord>(x.v);
            if (w.empty()) { os << "1"; break; }
            for (char c : w) {
                int l = static_cast<int8_t>(c);
                os << g.free_data().names[std::abs(l) - 1];
                if (l < 0) os << "^-1";
            }
            break;
        }
        case Family::lamplighter: {
            const auto& e = std::get<LampElem>(x.v);
            os << "({";
            for (size_t i = 0; i < e.lamps.size(); ++i)
                os << (i ? "," : "") << static_cast<int>(static_cast<int8_t>(e.lamps[i]));
            os << "}," << e.shift << ")";
            break;
        }
        case Family::direct_product: {
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::ProdWord>(x.v);
            os << "(";
            for (size_t i = 0; i < fs.size(); ++i) os << (i ? ", " : "") << element_str(fs[i], w[i]);
            os << ")";
            break;
        }
        case Family::free_product: {
            const auto& fs = g.factors_data().factors;
            const auto& w = std::get<GroupElement::FPWord>(x.v);
            if (w.empty()) { os << "1"; break; }
            for (size_t i = 0; i < w.size(); ++i) {
                if (i) os << "*";
                os << "[" << w[i].factor << ":" << element_str(fs[w[i].factor], w[i].g) << "]";
            }
            break;
        }
    }
    return os.str();
}

}  // namespace l2lab
