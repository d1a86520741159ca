#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "l2lab/error.hpp"

namespace l2lab {

enum class Family { finite, free_abelian, free_group, lamplighter, direct_product, free_product };

class Group;

struct FiniteData {
    int order = 0;
    std::vector<std::vector<int>> table;  // table[a][b] = a*b
    int identity = 0;
    std::vector<int> inverse;
};

struct ZnData {
    int n = 0;
};

struct FreeData {
    int rank = 0;
    std::vector<std::string> names;  // generator display names, defaults a,b,c,...
};

struct LampData {};

struct FactorsData {
    std::vector<Group> factors;
};

// Group context: everything needed to multiply, invert and order elements of
// one concrete group. Cheap to copy (shared payload).
class Group {
public:
    Group() = default;

    static Group finite(std::vector<std::vector<int>> table);
    static Group free_abelian(int n);
    static Group free_group(int rank, std::vector<std::string> names = {});
    static Group lamplighter();
    static Group direct_product(std::vector<Group> factors);
    static Group free_product(std::vector<Group> factors);

    Family family() const { return family_; }
    const FiniteData& finite_data() const { return std::get<FiniteData>(*data_); }
    const ZnData& zn_data() const { return std::get<ZnData>(*data_); }
    const FreeData& free_data() const { return std::get<FreeData>(*data_); }
    const FactorsData& factors_data() const { return std::get<FactorsData>(*data_); }

    bool operator==(const Group& o) const;

private:
    using Data = std::variant<FiniteData, ZnData, FreeData, LampData, FactorsData>;
    Family family_ = Family::free_abelian;
    std::shared_ptr<const Data> data_;
};

// Lamp configuration: strictly increasing positions of lit lamps (int8 each)
// plus the cursor shift. |position| and |shift| stay within +-120.
struct LampElem {
    std::string lamps;  // sorted signed bytes
    int32_t shift = 0;
    bool operator==(const LampElem& o) const { return shift == o.shift && lamps == o.lamps; }
};

class GroupElement;

struct FPSyllable;  // free-product syllable, defined below

// One element in normal form. Which alternative is active is determined by
// the owning Group's family; elements carry no back-pointer.
class GroupElement {
public:
    using ZnWord = std::vector<int64_t>;
    using FreeWord = std::string;  // signed int8 letters, +k / -k for generator k (1-based)
    using ProdWord = std::vector<GroupElement>;
    using FPWord = std::vector<FPSyllable>;

    std::variant<int64_t, ZnWord, FreeWord, LampElem, ProdWord, FPWord> v;

    GroupElement() : v(int64_t{0}) {}
    explicit GroupElement(int64_t idx) : v(idx) {}
    explicit GroupElement(ZnWord w) : v(std::move(w)) {}
    explicit GroupElement(FreeWord w) : v(std::move(w)) {}
    explicit GroupElement(LampElem w) : v(std::move(w)) {}
    explicit GroupElement(ProdWord w) : v(std::move(w)) {}
    explicit GroupElement(FPWord w) : v(std::move(w)) {}

    bool operator==(const GroupElement& o) const;
};

struct FPSyllable {
    int32_t factor = 0;
    GroupElement g;
    bool operator==(const FPSyllable& o) const { return factor == o.factor && g == o.g; }
};

GroupElement identity(const Group& g);
bool is_identity(const Group& g, const GroupElement& x);
GroupElement compose(const Group& g, const GroupElement& a, const GroupElement& b);
GroupElement invert(const Group& g, const GroupElement& a);

// Throws ValidationError when x is not a valid normal form for g.
void validate_element(const Group& g, const GroupElement& x);

// Strict total order on normal forms; fixes term order in ring elements.
bool element_less(const GroupElement& a, const GroupElement& b);

size_t element_hash(const GroupElement& x);

// Truncation metric. free: reduced length; zn: max |coordinate|;
// lamplighter: max(|shift|, furthest lamp); finite: 0; direct products take
// the max over components, free products the sum over syllables.
int64_t word_radius(const Group& g, const GroupElement& x);

std::string element_str(const Group& g, const GroupElement& x);

struct ElemHash {
    size_t operator()(const GroupElement& x) const { return element_hash(x); }
};

struct ElemLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const { return element_less(a, b); }
};

}  // namespace l2lab
