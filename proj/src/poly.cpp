#include "cspuniv/poly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cspuniv/algorithms.hpp"
#include "cspuniv/errors.hpp"

namespace cspuniv {

int FiniteFunction::eval(const std::vector<int>& args) const {
    if (args.size() != arity()) throw UsageError(name + ": expected " + std::to_string(arity()) + " arguments");
    int r = rule(args);
    if (r < 0 || r >= static_cast<int>(codomain.size())) throw PropertyViolation(name + ": value outside the codomain");
    return r;
}

Element FiniteFunction::operator()(const Tuple& args) const {
    std::vector<int> idx;
    idx.reserve(args.size());
    for (const auto& a : args) {
        auto it = std::find(domain.begin(), domain.end(), a);
        if (it == domain.end()) throw UsageError(name + ": " + a + " is not in the domain");
        idx.push_back(static_cast<int>(it - domain.begin()));
    }
    return codomain[eval(idx)];
}

// ---------------------------------------------------------------- shapes

PaletteShape PaletteShape::overlined(int blocks, int size) {
    PaletteShape s;
    for (int i = 0; i < blocks; ++i) {
        s.block_sizes.push_back(size);
        s.groups.push_back({i});
    }
    return s;
}

PaletteShape PaletteShape::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw UsageError("shape must look like (3,3,3) or (2,1|1,2)");
    t = t.substr(1, t.size() - 2);
    auto bar = t.find('|');
    auto ints = [](const std::string& s) {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            try {
                std::size_t used = 0;
                out.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw UsageError("bad integer in shape: '" + item + "'");
            }
        return out;
    };
    PaletteShape s;
    s.block_sizes = ints(t.substr(0, bar));
    if (bar == std::string::npos) {
        for (int i = 0; i < static_cast<int>(s.block_sizes.size()); ++i) s.groups.push_back({i});
    } else {
        std::stringstream ss(t.substr(bar + 1));
        std::string grp;
        while (std::getline(ss, grp, ';')) {
            auto g = ints(grp);
            for (auto& i : g) --i;
            s.groups.push_back(g);
        }
    }
    s.validate();
    return s;
}

std::string PaletteShape::render() const {
    std::string out = "(";
    for (std::size_t i = 0; i < block_sizes.size(); ++i) out += (i ? "," : "") + std::to_string(block_sizes[i]);
    out += "|";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) out += ";";
        for (std::size_t k = 0; k < groups[g].size(); ++k) out += (k ? "," : "") + std::to_string(groups[g][k] + 1);
    }
    return out + ")";
}

int PaletteShape::total() const { return std::accumulate(block_sizes.begin(), block_sizes.end(), 0); }

int PaletteShape::block_start(int i) const {
    return std::accumulate(block_sizes.begin(), block_sizes.begin() + i, 0);
}

void PaletteShape::validate() const {
    if (block_sizes.empty()) throw UsageError("shape has no blocks");
    for (int k : block_sizes)
        if (k <= 0) throw UsageError("block sizes must be positive");
    std::set<int> used;
    for (const auto& g : groups) {
        if (g.empty()) throw UsageError("empty overline group");
        for (int i : g) {
            if (i < 0 || i >= static_cast<int>(block_sizes.size())) throw UsageError("group index out of range");
            if (!used.insert(i).second) throw UsageError("overline groups must be disjoint");
        }
    }
}

BlockFlavor parse_flavor(const std::string& s) {
    if (s == "sym") return BlockFlavor::Symmetric;
    if (s == "tsym") return BlockFlavor::TotallySymmetric;
    if (s == "alt") return BlockFlavor::Alternating;
    throw UsageError("flavor must be sym, tsym or alt");
}

std::string to_string(BlockFlavor f) {
    switch (f) {
        case BlockFlavor::Symmetric: return "sym";
        case BlockFlavor::TotallySymmetric: return "tsym";
        case BlockFlavor::Alternating: return "alt";
    }
    return {};
}

// ---------------------------------------------------------------- polymorphisms

namespace {

std::vector<int> indices_of(const std::vector<Element>& dom, const Tuple& t) {
    std::vector<int> out;
    for (const auto& e : t) {
        auto it = std::find(dom.begin(), dom.end(), e);
        if (it == dom.end()) throw UsageError("element " + e + " outside the domain");
        out.push_back(static_cast<int>(it - dom.begin()));
    }
    return out;
}

std::uint64_t encode(const std::vector<int>& t, std::size_t base) {
    std::uint64_t c = 0;
    for (int v : t) c = c * base + static_cast<std::uint64_t>(v);
    return c;
}

// |R|^N, saturating at cap + 1.
std::uint64_t power_capped(std::uint64_t base, std::size_t n, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (base != 0 && r > (cap + 1) / base) return cap + 1;
        r *= base;
    }
    return std::min(r, cap + 1);
}

}  // namespace

PolymorphismReport is_polymorphism(const FiniteFunction& f, const Template& src, const Template& dst, const Limits& lim) {
    if (f.domain != src.domain) throw UsageError(f.name + ": domain differs from template " + src.name);
    if (f.codomain != dst.domain) throw UsageError(f.name + ": codomain differs from template " + dst.name);
    PolymorphismReport rep;
    std::mt19937_64 rng(lim.seed);
    const std::size_t N = f.arity();
    std::vector<int> args(N);
    for (const auto& [rel, tuples] : src.relations) {
        if (tuples.empty()) continue;
        const auto& target = dst.relation(rel);
        std::unordered_set<std::uint64_t> allowed;
        for (const auto& t : target) allowed.insert(encode(indices_of(dst.domain, t), dst.domain.size()));
        std::vector<std::vector<int>> rows;
        for (const auto& t : tuples) rows.push_back(indices_of(src.domain, t));
        const std::size_t m = rows.front().size();

        std::vector<std::size_t> pick(N, 0);
        std::vector<int> image(m);
        auto check = [&]() {
            ++rep.checks;
            for (std::size_t c = 0; c < m; ++c) {
                for (std::size_t k = 0; k < N; ++k) args[k] = rows[pick[k]][c];
                image[c] = f.eval(args);
            }
            if (allowed.count(encode(image, dst.domain.size()))) return true;
            PolyCounterexample ce{rel, {}, {}};
            for (auto p : pick) ce.rows.push_back(tuples[p]);
            for (int v : image) ce.image.push_back(dst.domain[v]);
            rep.holds = false;
            rep.counterexample = std::move(ce);
            return false;
        };

        const std::uint64_t total = power_capped(rows.size(), N, lim.exhaustive_cap);
        if (total <= lim.exhaustive_cap) {
            for (;;) {
                if (!check()) return rep;
                std::size_t p = N;
                while (p > 0 && ++pick[p - 1] == rows.size()) pick[--p] = 0;
                if (p == 0) break;
            }
        } else {
            rep.exhaustive = false;
            std::uniform_int_distribution<std::size_t> pickd(0, rows.size() - 1);
            for (std::uint64_t s = 0; s < lim.samples; ++s) {
                for (auto& p : pick) p = pickd(rng);
                if (!check()) return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- palette tuples

bool is_palette_tuple(const PaletteShape& shape, const Tuple& t) {
    if (static_cast<int>(t.size()) != shape.total()) throw UsageError("tuple length differs from the shape");
    std::set<Element> need(t.begin(), t.end());
    auto constant_value = [&](int b) -> const Element* {
        int s = shape.block_start(b);
        for (int k = 1; k < shape.block_sizes[b]; ++k)
            if (t[s + k] != t[s]) return nullptr;
        return &t[s];
    };
    for (const auto& g : shape.groups) {
        const Element* v = constant_value(g[0]);
        if (!v) continue;
        bool filled = std::all_of(g.begin(), g.end(), [&](int b) {
            const Element* w = constant_value(b);
            return w && *w == *v;
        });
        if (filled) need.erase(*v);
    }
    return need.empty();
}

namespace {

// Canonical invariant of one block, as a byte string keyed by element index.
std::string block_key(BlockFlavor flavor, const int* x, int len, int q) {
    std::string key;
    switch (flavor) {
        case BlockFlavor::Symmetric: {
            std::vector<int> v(x, x + len);
            std::sort(v.begin(), v.end());
            for (int e : v) key += static_cast<char>(e);
            break;
        }
        case BlockFlavor::TotallySymmetric: {
            std::vector<bool> seen(q);
            for (int k = 0; k < len; ++k) seen[x[k]] = true;
            for (int e = 0; e < q; ++e) key += seen[e] ? '1' : '0';
            break;
        }
        case BlockFlavor::Alternating: {
            std::vector<int> net(q);
            for (int k = 0; k < len; ++k) net[x[k]] += k % 2 == 0 ? 1 : -1;  // positions 1,3,5,... are odd
            for (int e = 0; e < q; ++e) key += std::to_string(net[e]) + ",";
            break;
        }
    }
    return key;
}

}  // namespace

bool block_equivalent(BlockFlavor flavor, const Tuple& x, const Tuple& y) {
    if (x.size() != y.size()) return false;
    std::vector<Element> dom(x.begin(), x.end());
    dom.insert(dom.end(), y.begin(), y.end());
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    auto xi = indices_of(dom, x), yi = indices_of(dom, y);
    const int q = static_cast<int>(dom.size());
    return block_key(flavor, xi.data(), static_cast<int>(xi.size()), q) ==
           block_key(flavor, yi.data(), static_cast<int>(yi.size()), q);
}

bool palette_equivalent(const PaletteShape& shape, const std::vector<BlockFlavor>& flavors, const Tuple& a,
                        const Tuple& b) {
    if (flavors.size() != shape.block_sizes.size()) throw UsageError("one flavor per block expected");
    if (!is_palette_tuple(shape, a) || !is_palette_tuple(shape, b)) return false;
    for (std::size_t i = 0; i < flavors.size(); ++i) {
        int s = shape.block_start(static_cast<int>(i));
        Tuple x(a.begin() + s, a.begin() + s + shape.block_sizes[i]);
        Tuple y(b.begin() + s, b.begin() + s + shape.block_sizes[i]);
        if (!block_equivalent(flavors[i], x, y)) return false;
    }
    return true;
}

namespace {

struct IndexShape {
    std::vector<int> start, size;
    std::vector<std::vector<int>> groups;
    int total = 0;

    explicit IndexShape(const PaletteShape& s) : groups(s.groups), total(s.total()) {
        for (std::size_t i = 0; i < s.block_sizes.size(); ++i) {
            start.push_back(s.block_start(static_cast<int>(i)));
            size.push_back(s.block_sizes[i]);
        }
    }

    int constant(const std::vector<int>& t, int b) const {
        for (int k = 1; k < size[b]; ++k)
            if (t[start[b] + k] != t[start[b]]) return -1;
        return t[start[b]];
    }

    bool palette(const std::vector<int>& t, int q) const {
        std::vector<bool> need(q);
        for (int v : t) need[v] = true;
        for (const auto& g : groups) {
            int v = constant(t, g[0]);
            if (v < 0) continue;
            if (std::all_of(g.begin(), g.end(), [&](int b) { return constant(t, b) == v; })) need[v] = false;
        }
        return std::none_of(need.begin(), need.end(), [](bool x) { return x; });
    }
};

Tuple render(const std::vector<Element>& dom, const std::vector<int>& t) {
    Tuple out;
    for (int v : t) out.push_back(dom[v]);
    return out;
}

// Random palette tuple: k distinct elements pinned to k distinct groups,
// the rest filled from the same k elements.
std::vector<int> random_palette(const IndexShape& sh, int q, std::mt19937_64& rng) {
    std::vector<int> elems(q), grps(sh.groups.size());
    std::iota(elems.begin(), elems.end(), 0);
    std::iota(grps.begin(), grps.end(), 0);
    std::shuffle(elems.begin(), elems.end(), rng);
    std::shuffle(grps.begin(), grps.end(), rng);
    int kmax = std::min<int>(q, static_cast<int>(sh.groups.size()));
    int k = std::uniform_int_distribution<int>(1, kmax)(rng);
    std::vector<int> t(sh.total);
    std::uniform_int_distribution<int> pick(0, k - 1);
    for (auto& v : t) v = elems[pick(rng)];
    for (int g = 0; g < k; ++g)
        for (int b : sh.groups[grps[g]])
            for (int j = 0; j < sh.size[b]; ++j) t[sh.start[b] + j] = elems[g];
    return t;
}

// Random block equivalent to x under the flavor, over q elements.
void perturb_block(BlockFlavor flavor, int* x, int len, int q, std::mt19937_64& rng) {
    switch (flavor) {
        case BlockFlavor::Symmetric: std::shuffle(x, x + len, rng); break;
        case BlockFlavor::TotallySymmetric: {
            std::vector<int> support(x, x + len);
            std::sort(support.begin(), support.end());
            support.erase(std::unique(support.begin(), support.end()), support.end());
            std::vector<int> pos(len);
            std::iota(pos.begin(), pos.end(), 0);
            std::shuffle(pos.begin(), pos.end(), rng);
            std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
            for (int k = 0; k < len; ++k) x[pos[k]] = k < static_cast<int>(support.size()) ? support[k] : support[pick(rng)];
            break;
        }
        case BlockFlavor::Alternating: {
            std::vector<int> odd, even;
            for (int k = 0; k < len; ++k) (k % 2 == 0 ? odd : even).push_back(x[k]);
            std::shuffle(odd.begin(), odd.end(), rng);
            std::shuffle(even.begin(), even.end(), rng);
            for (int k = 0; k < len; ++k) x[k] = k % 2 == 0 ? odd[k / 2] : even[k / 2];
            // replace a few equal odd/even pairs by a fresh common value
            std::uniform_int_distribution<int> coin(0, 2), el(0, q - 1);
            int rounds = coin(rng);
            for (int r = 0; r < rounds && len >= 2; ++r) {
                int p = 2 * std::uniform_int_distribution<int>(0, (len - 1) / 2)(rng);
                int e = 2 * std::uniform_int_distribution<int>(0, len / 2 - 1)(rng) + 1;
                if (x[p] == x[e]) x[p] = x[e] = el(rng);
            }
            break;
        }
    }
}

}  // namespace

PaletteReport is_palette_block(const FiniteFunction& f, const PaletteShape& shape,
                               const std::vector<BlockFlavor>& flavors, const Limits& lim) {
    shape.validate();
    if (static_cast<int>(f.arity()) != shape.total()) throw UsageError(f.name + ": arity differs from the shape");
    if (flavors.size() != shape.block_sizes.size()) throw UsageError("one flavor per block expected");
    const IndexShape sh(shape);
    const int q = static_cast<int>(f.domain.size());
    const int nb = static_cast<int>(shape.block_sizes.size());
    PaletteReport rep;

    auto fail = [&](const std::vector<int>& a, const std::vector<int>& b, int block) {
        rep.holds = false;
        rep.counterexample = {render(f.domain, a), render(f.domain, b)};
        rep.block = block;
    };

    const std::uint64_t total = power_capped(q, sh.total, lim.exhaustive_cap);
    if (total <= lim.exhaustive_cap) {
        // key: block index, the tuple outside the block, the block's invariant
        std::unordered_map<std::string, std::pair<int, std::vector<int>>> seen;
        std::vector<int> t(sh.total, 0);
        for (;;) {
            if (sh.palette(t, q)) {
                ++rep.checks;
                int v = f.eval(t);
                for (int b = 0; b < nb; ++b) {
                    std::string key(1, static_cast<char>(b));
                    for (int k = 0; k < sh.total; ++k)
                        key += (k >= sh.start[b] && k < sh.start[b] + sh.size[b]) ? '*' : static_cast<char>('0' + t[k]);
                    key += block_key(flavors[b], t.data() + sh.start[b], sh.size[b], q);
                    auto [it, fresh] = seen.try_emplace(key, v, t);
                    if (!fresh && it->second.first != v) {
                        fail(it->second.second, t, b);
                        return rep;
                    }
                }
            }
            int p = sh.total;
            while (p > 0 && ++t[p - 1] == q) t[--p] = 0;
            if (p == 0) break;
        }
        return rep;
    }

    rep.exhaustive = false;
    std::mt19937_64 rng(lim.seed);
    std::uniform_int_distribution<int> block(0, nb - 1);
    for (std::uint64_t s = 0; s < lim.samples; ++s) {
        auto a = random_palette(sh, q, rng);
        auto b = a;
        int i = block(rng);
        perturb_block(flavors[i], b.data() + sh.start[i], sh.size[i], q, rng);
        if (!sh.palette(b, q)) continue;
        ++rep.checks;
        if (f.eval(a) != f.eval(b)) {
            fail(a, b, i);
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------- constructions

namespace {

std::vector<std::string> block_arg_names(const PaletteShape& shape) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < shape.block_sizes.size(); ++i)
        for (int j = 0; j < shape.block_sizes[i]; ++j)
            out.push_back("x" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    return out;
}

std::vector<std::string> plain_arg_names(int n) {
    std::vector<std::string> out;
    for (int j = 1; j <= n; ++j) out.push_back("x" + std::to_string(j));
    return out;
}

const std::vector<Element> kBool = {"0", "1"};
const std::vector<Element> kZ2Z3 = {"0", "1", "0p", "1p", "2p"};
const std::vector<Element> kZ2Arrow = {"0", "1", "2"};

}  // namespace

FiniteFunction conj_n(int n) {
    if (n < 1) throw UsageError("conj_n needs n >= 1");
    return {"conj_n:" + std::to_string(n), plain_arg_names(n), kBool, kBool, [](const std::vector<int>& x) {
                return std::all_of(x.begin(), x.end(), [](int v) { return v == 1; }) ? 1 : 0;
            }};
}

FiniteFunction majority_odd(int n) {
    if (n < 1 || n % 2 == 0) throw UsageError("majority_odd needs an odd arity");
    return {"majority_odd:" + std::to_string(n), plain_arg_names(n), kBool, kBool, [n](const std::vector<int>& x) {
                return 2 * std::count(x.begin(), x.end(), 1) > n ? 1 : 0;
            }};
}

FiniteFunction first_const_block(const std::vector<Element>& domain, const PaletteShape& shape) {
    shape.validate();
    IndexShape sh(shape);
    return {"first_const_block", block_arg_names(shape), domain, domain, [sh](const std::vector<int>& x) {
                for (std::size_t b = 0; b < sh.size.size(); ++b) {
                    int v = sh.constant(x, static_cast<int>(b));
                    if (v >= 0) return v;
                }
                return x[0];
            }};
}

FiniteFunction z2z3_alt(const PaletteShape& shape) {
    shape.validate();
    IndexShape sh(shape);
    return {"z2z3_alt", block_arg_names(shape), kZ2Z3, kZ2Z3, [sh](const std::vector<int>& x) {
                for (std::size_t b = 0; b < sh.size.size(); ++b) {
                    const int* blk = x.data() + sh.start[b];
                    const int len = sh.size[b];
                    bool z2 = std::all_of(blk, blk + len, [](int v) { return v < 2; });
                    bool z3 = std::all_of(blk, blk + len, [](int v) { return v >= 2; });
                    if (!z2 && !z3) continue;
                    const int p = z2 ? 2 : 3, off = z2 ? 0 : 2;
                    int s = 0;
                    for (int k = 0; k < len; ++k) s += (k % 2 == 0 ? 1 : p - 1) * (blk[k] - off);
                    return s % p + off;
                }
                return x[0];
            }};
}

FiniteFunction z2arrow2_sum(const PaletteShape& shape, bool first_argument_fallback) {
    shape.validate();
    IndexShape sh(shape);
    return {first_argument_fallback ? "z2arrow2_sum_x11" : "z2arrow2_sum", block_arg_names(shape), kZ2Arrow, kZ2Arrow,
            [sh, first_argument_fallback](const std::vector<int>& x) {
                for (std::size_t b = 0; b < sh.size.size(); ++b) {
                    const int* blk = x.data() + sh.start[b];
                    if (!std::all_of(blk, blk + sh.size[b], [](int v) { return v < 2; })) continue;
                    return std::accumulate(blk, blk + sh.size[b], 0) % 2;
                }
                if (first_argument_fallback) return x[0];
                // x_1 alone breaks S(x,y,z) = (x = y or z != 2): columns (0,0,0), (0,0,1), (2,0,0) would give (0,1,2)
                for (int v : x)
                    if (v != 2) return v;
                return 2;
            }};
}

FiniteFunction z2arrow2_ternary() {
    return {"z2arrow2_ternary", plain_arg_names(3), kZ2Arrow, kZ2Arrow, [](const std::vector<int>& x) {
                if (x[0] < 2 && x[1] < 2 && x[2] < 2) return (x[0] + x[1] + x[2]) % 2;
                for (int v : x)
                    if (v != 2) return v;
                return 2;
            }};
}

FiniteFunction construct(const std::string& name, const std::vector<Element>& domain, const PaletteShape& shape) {
    if (name == "first_const_block") return first_const_block(domain, shape);
    if (name == "z2z3_alt") return z2z3_alt(shape);
    if (name == "z2arrow2_sum") return z2arrow2_sum(shape);
    if (name == "z2arrow2_sum_x11") return z2arrow2_sum(shape, true);
    if (name == "z2arrow2_ternary") return z2arrow2_ternary();
    if (name == "conj_n") return conj_n(shape.total());
    if (name == "majority_odd") return majority_odd(shape.total());
    throw UsageError("unknown construction: " + name);
}

bool check_purity(const FiniteFunction& f, std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> el(0, static_cast<int>(f.domain.size()) - 1);
    std::vector<int> x(f.arity());
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (auto& v : x) v = el(rng);
        if (f.eval(x) != f.eval(x)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- solution synthesis

Assignment build_solution_from_polymorphism(const Instance& inst, const FiniteFunction& f, const PaletteShape& shape,
                                            const std::vector<BlockSolution>& blocks) {
    shape.validate();
    if (blocks.size() != shape.block_sizes.size()) throw UsageError("one d-solution per block expected");
    if (static_cast<int>(f.arity()) != shape.total()) throw UsageError(f.name + ": arity differs from the shape");
    for (std::size_t j = 0; j < blocks.size(); ++j)
        if (blocks[j].d != shape.block_sizes[j])
            throw UsageError("block " + std::to_string(j + 1) + " has size " + std::to_string(shape.block_sizes[j]) +
                             " but carries a " + blocks[j].d.get_str() + "-solution");

    std::set<std::string> constrained;
    for (const auto& c : inst.constraints) constrained.insert(c.scope.begin(), c.scope.end());

    Assignment out;
    for (const auto& x : inst.variables) {
        if (!constrained.count(x)) {
            out[x] = inst.domain(x).front();
            continue;
        }
        std::vector<int> args;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            std::size_t before = args.size();
            for (std::size_t c = 0; c < f.domain.size(); ++c) {
                mpz_class cnt = blocks[j].solution.at(LPVar::value_weight(x, f.domain[c]));
                if (sgn(cnt) < 0) throw PropertyViolation("negative count in a d-solution");
                for (mpz_class k = 0; k < cnt; ++k) args.push_back(static_cast<int>(c));
            }
            if (static_cast<int>(args.size() - before) != shape.block_sizes[j])
                throw PropertyViolation("marginals of " + x + " in block " + std::to_string(j + 1) + " do not sum to d");
        }
        out[x] = f.codomain[f.eval(args)];
    }
    if (!satisfies(inst, out)) throw PropertyViolation("assembled assignment violates a constraint");
    return out;
}

std::optional<Synthesis> synthesize_solution(const Instance& inst) {
    auto v = run("singl(blp>aip)", inst);
    if (!v.yes) return std::nullopt;
    const Instance& reduced = *v.reduced;

    std::vector<Instance> omega;
    for (const auto& x : variables_in_order(reduced))
        for (const auto& a : reduced.domain(x)) omega.push_back(reduce_domain(reduced, x, {a}));
    if (omega.empty()) return Synthesis{{}, PaletteShape::overlined(1, 1), 1};

    const auto& domain = inst.domain(inst.variables.front());
    for (const auto& x : inst.variables)
        if (inst.domain(x) != domain) throw UsageError("synthesis needs one shared domain");

    auto gather = [&](const mpz_class& d) -> std::optional<std::vector<BlockSolution>> {
        std::vector<BlockSolution> out;
        for (const auto& I : omega) {
            auto s = find_d_solution(I, d);
            if (!s) return std::nullopt;
            out.push_back({I, std::move(*s), d});
        }
        return out;
    };

    std::optional<std::vector<BlockSolution>> blocks;
    mpz_class d = 1;
    for (; d <= 64 && !blocks; ++d) blocks = gather(d);
    if (blocks) {
        --d;
    } else {
        // Every d >= q^2 - q is a nonnegative combination of q and q + 1.
        d = 1;
        for (const auto& I : omega) {
            auto sc = blp_aip_scaling(I);
            if (!sc) throw PropertyViolation("a singleton restriction accepted by blp>aip has no scaling data");
            mpz_class need = sc->q * sc->q;
            if (need > d) d = need;
        }
        blocks = gather(d);
        if (!blocks) throw PropertyViolation("no common d-solution at d = " + d.get_str());
    }
    if (d > 4096) throw ResourceError("block size " + d.get_str() + " is too large to evaluate");

    auto shape = PaletteShape::overlined(static_cast<int>(omega.size()), static_cast<int>(d.get_si()));
    auto f = first_const_block(domain, shape);
    return Synthesis{build_solution_from_polymorphism(inst, f, shape, *blocks), shape, d};
}

}  // namespace cspuniv
