#include "mpqg/quea.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

void hash_mix(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

std::size_t hash_ints(std::size_t seed, const std::vector<int>& v) {
    hash_mix(seed, v.size());
    for (int x : v) hash_mix(seed, static_cast<std::size_t>(x));
    return seed;
}

// All words with the given letter multiplicities, in lexicographic order.
std::vector<Word> words_of(const std::vector<int>& beta) {
    Word w;
    for (std::size_t i = 0; i < beta.size(); ++i) w.insert(w.end(), sz(beta[i]), static_cast<int>(i));
    std::vector<Word> out;
    do out.push_back(w);
    while (std::next_permutation(w.begin(), w.end()));
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

int total(const std::vector<int>& d) {
    int s = 0;
    for (int x : d) s += x;
    return s;
}

bool low_enough(const TruncLaurent& a, const TruncLaurent& b, int N) {
    return a.valuation() + b.valuation() <= N;
}

}  // namespace

bool Mono::is_unit() const {
    return f.empty() && e.empty() && std::all_of(h.begin(), h.end(), [](int x) { return x == 0; });
}

std::size_t MonoHash::operator()(const Mono& m) const noexcept {
    std::size_t s = hash_ints(0, m.f);
    s = hash_ints(s, m.h);
    return hash_ints(s, m.e);
}

std::size_t QContext::PairHash::operator()(const std::pair<Mono, Mono>& p) const noexcept {
    std::size_t s = MonoHash{}(p.first);
    hash_mix(s, MonoHash{}(p.second));
    return s;
}

std::size_t QContext::WordPairHash::operator()(const std::pair<Word, Word>& p) const noexcept {
    return hash_ints(hash_ints(1, p.first), p.second);
}

// ---- UElem / Tensor ----

void UElem::add(const Mono& m, const TruncLaurent& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

UElem& UElem::operator+=(const UElem& o) {
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
}

UElem& UElem::operator-=(const UElem& o) {
    for (const auto& [m, c] : o.terms) add(m, -c);
    return *this;
}

UElem UElem::operator-() const {
    UElem r;
    for (const auto& [m, c] : terms) r.terms.emplace(m, -c);
    return r;
}

UElem UElem::scaled(const TruncLaurent& c) const {
    UElem r;
    for (const auto& [m, x] : terms) r.add(m, x * c);
    return r;
}

UElem UElem::truncated(int order) const {
    UElem r;
    for (const auto& [m, x] : terms) r.add(m, x.truncated(order));
    return r;
}

bool UElem::is_zero_to(int n) const {
    return std::all_of(terms.begin(), terms.end(), [n](const auto& kv) { return kv.second.is_zero_to(n); });
}

int UElem::valuation() const {
    int v = TruncLaurent::kExact;
    for (const auto& [m, c] : terms) v = std::min(v, c.valuation());
    return v;
}

void Tensor::add(const std::vector<Mono>& k, const TruncLaurent& c) {
    if (c.is_zero()) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
        terms.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

Tensor& Tensor::operator+=(const Tensor& o) {
    for (const auto& [k, c] : o.terms) add(k, c);
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
    for (const auto& [k, c] : o.terms) add(k, -c);
    return *this;
}

Tensor Tensor::scaled(const TruncLaurent& c) const {
    Tensor r;
    r.legs = legs;
    for (const auto& [k, x] : terms) r.add(k, x * c);
    return r;
}

bool Tensor::is_zero_to(int n) const {
    return std::all_of(terms.begin(), terms.end(), [n](const auto& kv) { return kv.second.is_zero_to(n); });
}

Tensor tensor(const UElem& a, const UElem& b) { return tensor({&a, &b}); }

Tensor tensor(const std::vector<const UElem*>& legs) {
    Tensor r;
    r.legs = static_cast<int>(legs.size());
    std::vector<Mono> key(legs.size());
    std::function<void(std::size_t, const TruncLaurent&)> rec = [&](std::size_t l, const TruncLaurent& c) {
        if (l == legs.size()) {
            r.add(key, c);
            return;
        }
        for (const auto& [m, x] : legs[l]->terms) {
            key[l] = m;
            rec(l + 1, c * x);
        }
    };
    rec(0, TruncLaurent(1));
    return r;
}

Tensor flip(const Tensor& x) {
    Tensor r;
    r.legs = 2;
    for (const auto& [k, c] : x.terms) r.add({k[1], k[0]}, c);
    return r;
}

std::string sym_str(const Sym& s, const std::vector<std::string>& labels) {
    if (s.kind == 'H') return sz(s.index) < labels.size() ? labels[sz(s.index)] : "H" + std::to_string(s.index + 1);
    return std::string(1, s.kind) + std::to_string(s.index + 1);
}

std::string mono_str(const Mono& m, const std::vector<std::string>& labels) {
    std::ostringstream os;
    bool first = true;
    auto put = [&](const std::string& s) {
        if (!first) os << '*';
        os << s;
        first = false;
    };
    for (int l : m.f) put("F" + std::to_string(l + 1));
    for (std::size_t g = 0; g < m.h.size(); ++g) {
        if (m.h[g] == 0) continue;
        std::string s = sym_str({'H', static_cast<int>(g)}, labels);
        put(m.h[g] == 1 ? s : s + "^" + std::to_string(m.h[g]));
    }
    for (int l : m.e) put("E" + std::to_string(l + 1));
    if (first) os << "1";
    return os.str();
}

// ---- Serre normal forms ----

SerreSystem::SerreSystem(const CartanDatum& A, const LMat& P, int order, bool enabled, bool positive)
    : A_(A), P_(P), order_(order), enabled_(enabled) {
    int n = A.n();
    serre_.assign(sz(n), std::vector<std::vector<std::pair<Word, TruncLaurent>>>(sz(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int m = 1 - A.A(i, j);
            auto& out = serre_[sz(i)][sz(j)];
            TruncLaurent skew = (P(i, j) - P(j, i)) * Rational(positive ? 1 : -1, 2);
            for (int k = 0; k <= m; ++k) {
                TruncLaurent c = qbinom(m, k, A.d[sz(i)], order) * qpow(skew * Rational(k), order);
                if (k % 2) c = -c;
                Word w(sz(m - k), i);
                w.push_back(j);
                w.insert(w.end(), sz(k), i);
                out.emplace_back(w, c.truncated(order));
            }
        }
}

std::vector<std::pair<Word, TruncLaurent>> SerreSystem::serre_element(int i, int j) const {
    return serre_[sz(i)][sz(j)];
}

const SerreSystem::Table& SerreSystem::table(const std::vector<int>& deg) {
    auto it = tables_.find(deg);
    if (it != tables_.end()) return it->second;
    Table T;
    int n = A_.n();
    if (enabled_ && total(deg) >= 2) {
        std::vector<std::map<Word, TruncLaurent>> rows;
        for (int l = 0; l < n; ++l) {
            if (deg[sz(l)] == 0) continue;
            std::vector<int> sub = deg;
            --sub[sz(l)];
            std::vector<std::map<Word, TruncLaurent>> lower = table(sub).basis;
            for (const auto& r : lower) {
                std::map<Word, TruncLaurent> a, b;
                for (const auto& [w, c] : r) {
                    a.emplace(concat(w, Word{l}), c);
                    b.emplace(concat(Word{l}, w), c);
                }
                rows.push_back(std::move(a));
                rows.push_back(std::move(b));
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                std::vector<int> sd(sz(n), 0);
                sd[sz(i)] = 1 - A_.A(i, j);
                sd[sz(j)] = 1;
                if (sd != deg) continue;
                std::map<Word, TruncLaurent> r;
                for (const auto& [w, c] : serre_[sz(i)][sz(j)]) r[w] += c;
                rows.push_back(std::move(r));
            }
        std::vector<Word> cols = words_of(deg);
        std::map<Word, std::size_t> index;
        for (std::size_t c = 0; c < cols.size(); ++c) index.emplace(cols[c], c);
        std::vector<std::vector<TruncLaurent>> M(rows.size(), std::vector<TruncLaurent>(cols.size(), TruncLaurent(0)));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (const auto& [w, c] : rows[r]) M[r][index.at(w)] = c.truncated(order_);
        std::vector<bool> used(rows.size(), false);
        std::vector<int> pivot_row(cols.size(), -1);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::size_t p = rows.size();
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (!used[r] && M[r][c].is_unit()) {
                    p = r;
                    break;
                }
            if (p == rows.size()) continue;
            used[p] = true;
            pivot_row[c] = static_cast<int>(p);
            TruncLaurent inv = ts_inv(M[p][c], order_);
            for (auto& x : M[p]) x = (x * inv).truncated(order_);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == p || M[r][c].is_zero()) continue;
                TruncLaurent f = M[r][c];
                for (std::size_t k = 0; k < cols.size(); ++k)
                    if (!M[p][k].is_zero()) M[r][k] = (M[r][k] - f * M[p][k]).truncated(order_);
            }
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (used[r]) continue;
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!M[r][c].is_zero_to(order_)) {
                    std::ostringstream os;
                    os << "degree (";
                    for (std::size_t k = 0; k < deg.size(); ++k) os << (k ? "," : "") << deg[k];
                    os << "): relation with non-unit leading coefficient survives at column " << c;
                    throw CompletionIncomplete(os.str());
                }
        }
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (pivot_row[c] < 0) continue;
            const auto& row = M[sz(pivot_row[c])];
            std::vector<std::pair<Word, TruncLaurent>> nf;
            std::map<Word, TruncLaurent> basis_row;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                if (row[k].is_zero()) continue;
                basis_row.emplace(cols[k], row[k]);
                if (k != c) nf.emplace_back(cols[k], -row[k]);
            }
            T.nf.emplace(cols[c], std::move(nf));
            T.basis.push_back(std::move(basis_row));
        }
    }
    return tables_.emplace(deg, std::move(T)).first->second;
}

const std::vector<std::pair<Word, TruncLaurent>>* SerreSystem::reduce(const Word& w) {
    if (!enabled_ || w.size() < 2) return nullptr;
    std::vector<int> deg(sz(A_.n()), 0);
    for (int l : w) ++deg[sz(l)];
    const Table& T = table(deg);
    auto it = T.nf.find(w);
    return it == T.nf.end() ? nullptr : &it->second;
}

bool SerreSystem::is_normal(const Word& w) { return reduce(w) == nullptr; }

bool SerreSystem::is_obstruction(const Word& w) {
    if (w.size() < 2 || is_normal(w)) return false;
    return is_normal(Word(w.begin() + 1, w.end())) && is_normal(Word(w.begin(), w.end() - 1));
}

void SerreSystem::complete(int bound) {
    int n = A_.n();
    std::vector<int> deg(sz(n), 0);
    std::function<void(int, int)> rec = [&](int l, int left) {
        if (l == n) {
            table(deg);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            deg[sz(l)] = k;
            rec(l + 1, left - k);
        }
        deg[sz(l)] = 0;
    };
    rec(0, bound);
    completed_ = std::max(completed_, bound);
}

std::vector<std::pair<Word, std::vector<std::pair<Word, TruncLaurent>>>> SerreSystem::rules() {
    std::vector<std::pair<Word, std::vector<std::pair<Word, TruncLaurent>>>> out;
    std::vector<Word> lhs;
    for (const auto& [deg, T] : tables_)
        for (const auto& [w, nf] : T.nf) lhs.push_back(w);
    for (const Word& w : lhs)
        if (is_obstruction(w)) out.emplace_back(w, *reduce(w));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
    });
    return out;
}

// ---- context ----

QContext::QContext(const Realization& R, int order, bool serre)
    : R_(R),
      N_(order),
      ewords_(R.P.cartan, R.P.P, order, serre, true),
      fwords_(R.P.cartan, R.P.P, order, serre, false) {
    if (order < 0) throw UnsupportedArgument("negative truncation order");
    int n = R.n(), t = R.t;
    alpha_.reserve(sz(n * t));
    for (int j = 0; j < n; ++j)
        for (int g = 0; g < t; ++g) alpha_.push_back(R.Amat(j, g).truncated(order));
    const TruncLaurent h = TruncLaurent::hbar();
    for (int i = 0; i < n; ++i) {
        std::vector<TruncLaurent> up(sz(t)), dn(sz(t));
        for (int g = 0; g < t; ++g) {
            up[sz(g)] = h * R.Tp(i, g);
            dn[sz(g)] = -h * R.Tm(i, g);
        }
        // Work one order deeper, then divide by hbar.
        auto expo = [&](const std::vector<TruncLaurent>& lin) {
            HPoly r{{HExp(sz(t), 0), TruncLaurent(1)}};
            HPoly term = r;
            for (int k = 1; k <= order + 1; ++k) {
                HPoly next;
                for (const auto& [x, c] : term)
                    for (int g = 0; g < t; ++g) {
                        if (lin[sz(g)].is_zero()) continue;
                        HExp y = x;
                        ++y[sz(g)];
                        next[y] += (c * lin[sz(g)] * Rational(1, k)).truncated(order + 1);
                    }
                std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
                for (const auto& [x, c] : next) r[x] += c;
                term = std::move(next);
            }
            return r;
        };
        HPoly a = expo(up), b = expo(dn);
        for (const auto& [x, c] : b) a[x] -= c;
        int d = R.P.cartan.d[sz(i)];
        TruncLaurent qq = ts_div_h(qpow(TruncLaurent(d), order + 2) - qpow(TruncLaurent(-d), order + 2), 1);
        TruncLaurent inv = ts_inv(qq, order);
        HPoly k;
        for (const auto& [x, c] : a) {
            TruncLaurent v = (ts_div_h(c, 1) * inv).truncated(order);
            if (!v.is_zero()) k.emplace(x, v);
        }
        ef_poly_.push_back(k);
        ef_rhs_.push_back(from_hpoly(k));
    }
}

TruncLaurent QContext::weight(const std::vector<int>& deg, int g) const {
    TruncLaurent s(0);
    for (std::size_t j = 0; j < deg.size(); ++j)
        if (deg[j] != 0) s += alpha(static_cast<int>(j), g) * Rational(deg[j]);
    return s;
}

std::vector<int> QContext::degree(const Word& w) const {
    std::vector<int> d(sz(n()), 0);
    for (int l : w) ++d[sz(l)];
    return d;
}

std::vector<int> QContext::mono_weight(const Mono& m) const {
    std::vector<int> d(sz(n()), 0);
    for (int l : m.e) ++d[sz(l)];
    for (int l : m.f) --d[sz(l)];
    return d;
}

UElem QContext::one() const { return scalar(TruncLaurent(1)); }

UElem QContext::scalar(const TruncLaurent& c) const {
    UElem r;
    r.add(Mono{{}, HExp(sz(t()), 0), {}}, cut(c));
    return r;
}

UElem QContext::E(int i) const { return from_mono(Mono{{}, HExp(sz(t()), 0), {i}}); }
UElem QContext::F(int i) const { return from_mono(Mono{{i}, HExp(sz(t()), 0), {}}); }

UElem QContext::H(int g) const {
    HExp h(sz(t()), 0);
    h[sz(g)] = 1;
    return from_mono(Mono{{}, h, {}});
}

UElem QContext::E_word(const Word& w) {
    UElem r;
    emit(r, {}, HPoly{{HExp(sz(t()), 0), TruncLaurent(1)}}, w, TruncLaurent(1));
    return r;
}

UElem QContext::F_word(const Word& w) {
    UElem r;
    emit(r, w, HPoly{{HExp(sz(t()), 0), TruncLaurent(1)}}, {}, TruncLaurent(1));
    return r;
}

UElem QContext::from_mono(const Mono& m, const TruncLaurent& c) const {
    UElem r;
    r.add(m, cut(c));
    return r;
}

UElem QContext::toral(const LMat& row) const {
    UElem r;
    for (int g = 0; g < t(); ++g) {
        HExp h(sz(t()), 0);
        h[sz(g)] = 1;
        r.add(Mono{{}, h, {}}, cut(row(0, g)));
    }
    return r;
}

UElem QContext::exp_toral(const LMat& row, const TruncLaurent& c) const {
    if (!c.is_zero() && c.valuation() < 1) throw ExpArgument("exponential of a toral element needs an hbar factor");
    HPoly r{{HExp(sz(t()), 0), TruncLaurent(1)}};
    HPoly term = r;
    for (int k = 1; k <= N_; ++k) {
        HPoly next;
        for (const auto& [x, a] : term)
            for (int g = 0; g < t(); ++g) {
                TruncLaurent lin = c * row(0, g);
                if (lin.is_zero()) continue;
                HExp y = x;
                ++y[sz(g)];
                next[y] += cut(a * lin * Rational(1, k));
            }
        std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
        for (const auto& [x, a] : next) r[x] += a;
        term = std::move(next);
    }
    return from_hpoly(r);
}

UElem QContext::from_hpoly(const HPoly& p) const {
    UElem r;
    for (const auto& [x, c] : p) r.add(Mono{{}, x, {}}, cut(c));
    return r;
}

const UElem& QContext::ef_rhs(int i) { return ef_rhs_[sz(i)]; }

UElem QContext::serre_element(int i, int j, bool positive) {
    UElem r;
    for (const auto& [w, c] : words(positive).serre_element(i, j)) {
        Mono m{positive ? Word{} : w, HExp(sz(t()), 0), positive ? w : Word{}};
        if (serre()) {
            r += (positive ? E_word(w) : F_word(w)).scaled(c);
        } else {
            r.add(m, cut(c));
        }
    }
    return r.truncated(N_);
}

// ---- multiplication ----

HPoly QContext::hmul(const HPoly& a, const HPoly& b) const {
    HPoly r;
    for (const auto& [x, c] : a)
        for (const auto& [y, d] : b) {
            if (!low_enough(c, d, N_)) continue;
            HExp z = x;
            for (std::size_t g = 0; g < z.size(); ++g) z[g] += y[g];
            r[z] += cut(c * d);
        }
    std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
    return r;
}

// prod_g (H_g + sign * lambda(H_g))^{h_g}, lambda the weight of deg.
HPoly QContext::shifted(const HExp& h, const std::vector<int>& deg, int sign) {
    auto key = std::make_tuple(h, deg, sign);
    auto it = shift_memo_.find(key);
    if (it != shift_memo_.end()) return it->second;
    HPoly r{{HExp(h.size(), 0), TruncLaurent(1)}};
    bool zero_shift = std::all_of(deg.begin(), deg.end(), [](int x) { return x == 0; });
    for (std::size_t g = 0; g < h.size(); ++g) {
        if (h[g] == 0) continue;
        TruncLaurent lam = zero_shift ? TruncLaurent(0) : weight(deg, static_cast<int>(g)) * Rational(sign);
        HPoly next;
        for (const auto& [x, c] : r)
            for (int k = 0; k <= h[g]; ++k) {
                TruncLaurent coef(binomial(h[g], k));
                for (int p = 0; p < h[g] - k; ++p) coef *= lam;
                if (coef.is_zero()) continue;
                HExp y = x;
                y[g] += k;
                next[y] += cut(c * coef);
            }
        std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
        r = std::move(next);
    }
    shift_memo_.emplace(key, r);
    return r;
}

void QContext::emit(UElem& out, const Word& f, const HPoly& p, const Word& e, const TruncLaurent& c) {
    std::vector<std::pair<Word, TruncLaurent>> fr{{f, TruncLaurent(1)}}, er{{e, TruncLaurent(1)}};
    if (const auto* r = fwords_.reduce(f)) fr = *r;
    if (const auto* r = ewords_.reduce(e)) er = *r;
    for (const auto& [fa, ca] : fr)
        for (const auto& [eb, cb] : er) {
            TruncLaurent base = c * ca;
            if (!low_enough(c, ca, N_) || !low_enough(base, cb, N_)) continue;
            base = cut(base * cb);
            for (const auto& [x, cp] : p)
                if (low_enough(base, cp, N_)) out.add(Mono{fa, x, eb}, cut(base * cp));
        }
}

// E_e F_f in normal form, by E_e F_j = F_j E_e + sum_{e_p = j} K_j(H - wt(e_{<p})) E_{e without p}.
const UElem& QContext::straighten(const Word& e, const Word& f) {
    auto key = std::make_pair(e, f);
    auto it = straighten_memo_.find(key);
    if (it != straighten_memo_.end()) return it->second;
    UElem r;
    HPoly unit{{HExp(sz(t()), 0), TruncLaurent(1)}};
    if (f.empty() || e.empty()) {
        emit(r, f, unit, e, TruncLaurent(1));
    } else {
        int j = f.front();
        Word rest(f.begin() + 1, f.end());
        UElem first = straighten(e, rest);
        r += left_F(j, first);
        for (std::size_t p = 0; p < e.size(); ++p) {
            if (e[p] != j) continue;
            Word pre(e.begin(), e.begin() + static_cast<long>(p));
            std::vector<int> deg = degree(pre);
            auto mk = std::make_pair(j, deg);
            auto kt = ef_shift_memo_.find(mk);
            if (kt == ef_shift_memo_.end()) {
                HPoly k;
                for (const auto& [x, c] : ef_poly_[sz(j)])
                    for (const auto& [y, d] : shifted(x, deg, -1)) k[y] += cut(c * d);
                std::erase_if(k, [](const auto& kv) { return kv.second.is_zero(); });
                kt = ef_shift_memo_.emplace(mk, std::move(k)).first;
            }
            Word drop = e;
            drop.erase(drop.begin() + static_cast<long>(p));
            UElem sub = straighten(drop, rest);
            r += left_poly(kt->second, sub);
        }
    }
    return straighten_memo_.emplace(key, std::move(r)).first->second;
}

UElem QContext::left_F(int j, const UElem& x) {
    UElem r;
    for (const auto& [m, c] : x.terms) {
        Word f{j};
        f.insert(f.end(), m.f.begin(), m.f.end());
        emit(r, f, HPoly{{m.h, TruncLaurent(1)}}, m.e, c);
    }
    return r;
}

// p(H) F_f H^h E_e = F_f p(H - wt f) H^h E_e
UElem QContext::left_poly(const HPoly& p, const UElem& x) {
    UElem r;
    for (const auto& [m, c] : x.terms) {
        std::vector<int> deg = degree(m.f);
        HPoly q;
        for (const auto& [y, a] : p)
            for (const auto& [z, b] : shifted(y, deg, -1)) q[z] += cut(a * b);
        q = hmul(q, HPoly{{m.h, TruncLaurent(1)}});
        for (const auto& [z, a] : q)
            if (low_enough(a, c, N_)) r.add(Mono{m.f, z, m.e}, cut(a * c));
    }
    return r;
}

const UElem& QContext::mono_mul(const Mono& a, const Mono& b) {
    auto key = std::make_pair(a, b);
    auto it = mul_memo_.find(key);
    if (it != mul_memo_.end()) return it->second;
    UElem r;
    const UElem& mid = straighten(a.e, b.f);
    for (const auto& [m, c] : mid.terms) {
        HPoly p = hmul(shifted(a.h, degree(m.f), -1), HPoly{{m.h, TruncLaurent(1)}});
        p = hmul(p, shifted(b.h, degree(m.e), -1));
        emit(r, concat(a.f, m.f), p, concat(m.e, b.e), c);
    }
    return mul_memo_.emplace(key, std::move(r)).first->second;
}

UElem QContext::mul(const UElem& a, const UElem& b) {
    UElem r;
    for (const auto& [x, c] : a.terms)
        for (const auto& [y, d] : b.terms) {
            if (!low_enough(c, d, N_)) continue;
            TruncLaurent cd = c * d;
            for (const auto& [z, e] : mono_mul(x, y).terms)
                if (low_enough(cd, e, N_)) r.add(z, cut(cd * e));
        }
    return r;
}

UElem QContext::mul(const std::vector<UElem>& factors) {
    UElem r = one();
    for (const auto& f : factors) r = mul(r, f);
    return r;
}

UElem QContext::pow(const UElem& a, int k) {
    UElem r = one();
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

UElem QContext::commutator(const UElem& a, const UElem& b) { return mul(a, b) - mul(b, a); }

UElem QContext::gen(const Sym& s) const {
    if (s.kind == 'E') return E(s.index);
    if (s.kind == 'F') return F(s.index);
    return H(s.index);
}

UElem QContext::normalize(const GenWord& w) {
    UElem r = one();
    for (const Sym& s : w) r = mul(r, gen(s));
    return r;
}

UElem QContext::normalize(const GenPoly& p) {
    UElem r;
    for (const auto& [w, c] : p) r += normalize(w).scaled(c);
    return r.truncated(N_);
}

// ---- Hopf maps ----

const Tensor& QContext::mono_coproduct(const Mono& m) {
    auto it = cop_memo_.find(m);
    if (it != cop_memo_.end()) return it->second;
    Tensor r;
    r.legs = 2;
    Mono u{{}, HExp(sz(t()), 0), {}};
    if (m.is_unit()) {
        r.add({u, u}, TruncLaurent(1));
        return cop_memo_.emplace(m, std::move(r)).first->second;
    }
    Mono rest = m;
    Tensor last;
    last.legs = 2;
    if (!m.e.empty()) {
        int i = m.e.back();
        rest.e.pop_back();
        UElem ex = exp_toral(R_.Tp.row(i), TruncLaurent::hbar());
        last = tensor(E(i), one()) + tensor(ex, E(i));
    } else if (std::any_of(m.h.begin(), m.h.end(), [](int x) { return x != 0; })) {
        int g = static_cast<int>(m.h.size()) - 1;
        while (m.h[sz(g)] == 0) --g;
        --rest.h[sz(g)];
        last = tensor(H(g), one()) + tensor(one(), H(g));
    } else {
        int i = m.f.back();
        rest.f.pop_back();
        UElem ex = exp_toral(R_.Tm.row(i), -TruncLaurent::hbar());
        last = tensor(F(i), ex) + tensor(one(), F(i));
    }
    Tensor head = mono_coproduct(rest);
    r = tmul(head, last);
    return cop_memo_.emplace(m, std::move(r)).first->second;
}

Tensor QContext::coproduct(const UElem& x) {
    Tensor r;
    r.legs = 2;
    for (const auto& [m, c] : x.terms)
        for (const auto& [k, d] : mono_coproduct(m).terms)
            if (low_enough(c, d, N_)) r.add(k, cut(c * d));
    return r;
}

TruncLaurent QContext::counit(const UElem& x) const {
    for (const auto& [m, c] : x.terms)
        if (m.is_unit()) return c;
    return TruncLaurent(0);
}

const UElem& QContext::mono_antipode(const Mono& m) {
    auto it = ant_memo_.find(m);
    if (it != ant_memo_.end()) return it->second;
    if (m.is_unit()) return ant_memo_.emplace(m, one()).first->second;
    Mono rest = m;
    UElem first;
    if (!m.f.empty()) {
        int i = m.f.front();
        rest.f.erase(rest.f.begin());
        first = -mul(F(i), exp_toral(R_.Tm.row(i), TruncLaurent::hbar()));
    } else if (std::any_of(m.h.begin(), m.h.end(), [](int x) { return x != 0; })) {
        int g = 0;
        while (m.h[sz(g)] == 0) ++g;
        --rest.h[sz(g)];
        first = -H(g);
    } else {
        int i = m.e.front();
        rest.e.erase(rest.e.begin());
        first = -mul(exp_toral(R_.Tp.row(i), -TruncLaurent::hbar()), E(i));
    }
    UElem tail = mono_antipode(rest);
    UElem r = mul(tail, first);
    return ant_memo_.emplace(m, std::move(r)).first->second;
}

UElem QContext::antipode(const UElem& x) {
    UElem r;
    for (const auto& [m, c] : x.terms) r += mono_antipode(m).scaled(c);
    return r.truncated(N_);
}

Tensor QContext::tmul(const Tensor& a, const Tensor& b) {
    Tensor r;
    r.legs = a.legs;
    if (a.legs != b.legs) throw DimensionMismatch("tensor legs differ");
    std::vector<Mono> key(sz(a.legs));
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            if (!low_enough(ca, cb, N_)) continue;
            std::vector<const UElem*> legs;
            for (int l = 0; l < a.legs; ++l) legs.push_back(&mono_mul(ka[sz(l)], kb[sz(l)]));
            std::function<void(std::size_t, const TruncLaurent&)> rec = [&](std::size_t l, const TruncLaurent& c) {
                if (l == legs.size()) {
                    r.add(key, c);
                    return;
                }
                for (const auto& [m, x] : legs[l]->terms) {
                    if (!low_enough(c, x, N_)) continue;
                    key[l] = m;
                    rec(l + 1, cut(c * x));
                }
            };
            rec(0, cut(ca * cb));
        }
    return r;
}

Tensor QContext::coproduct_leg(const Tensor& x, int leg) {
    Tensor r;
    r.legs = x.legs + 1;
    for (const auto& [k, c] : x.terms)
        for (const auto& [kk, d] : mono_coproduct(k[sz(leg)]).terms) {
            if (!low_enough(c, d, N_)) continue;
            std::vector<Mono> key;
            for (int l = 0; l < x.legs; ++l) {
                if (l == leg) {
                    key.push_back(kk[0]);
                    key.push_back(kk[1]);
                } else {
                    key.push_back(k[sz(l)]);
                }
            }
            r.add(key, cut(c * d));
        }
    return r;
}

UElem QContext::multiply_legs(const Tensor& x) {
    UElem r;
    for (const auto& [k, c] : x.terms)
        for (const auto& [m, d] : mono_mul(k[0], k[1]).terms)
            if (low_enough(c, d, N_)) r.add(m, cut(c * d));
    return r;
}

Tensor QContext::map_leg(const Tensor& x, int leg, bool antipode_map) {
    Tensor r;
    r.legs = x.legs;
    for (const auto& [k, c] : x.terms) {
        const UElem& img = antipode_map ? mono_antipode(k[sz(leg)]) : from_mono(k[sz(leg)]);
        for (const auto& [m, d] : img.terms) {
            if (!low_enough(c, d, N_)) continue;
            std::vector<Mono> key = k;
            key[sz(leg)] = m;
            r.add(key, cut(c * d));
        }
    }
    return r;
}

Tensor QContext::counit_leg(const Tensor& x, int leg) const {
    Tensor r;
    r.legs = x.legs - 1;
    for (const auto& [k, c] : x.terms) {
        if (!k[sz(leg)].is_unit()) continue;
        std::vector<Mono> key = k;
        key.erase(key.begin() + leg);
        r.add(key, c);
    }
    return r;
}

// ---- rewriting ----

std::vector<Rewriter::Redex> Rewriter::redexes(const GenWord& w) {
    std::vector<Redex> out;
    int len = static_cast<int>(w.size());
    for (int p = 0; p + 1 < len; ++p) {
        const Sym& a = w[sz(p)];
        const Sym& b = w[sz(p + 1)];
        bool hit = (a.kind == 'H' && b.kind == 'H' && a.index > b.index) || (a.kind == 'E' && b.kind == 'H') ||
                   (a.kind == 'H' && b.kind == 'F') || (a.kind == 'E' && b.kind == 'F');
        if (hit) out.push_back({p, 2});
    }
    if (!ctx_.serre()) return out;
    for (int p = 0; p < len;) {
        char k = w[sz(p)].kind;
        int q = p;
        while (q < len && w[sz(q)].kind == k) ++q;
        if (k != 'H')
            for (int a = p; a < q; ++a)
                for (int b = a + 2; b <= q; ++b) {
                    Word u;
                    for (int c = a; c < b; ++c) u.push_back(w[sz(c)].index);
                    if (ctx_.words(k == 'E').is_obstruction(u)) out.push_back({a, b - a});
                }
        p = q;
    }
    std::sort(out.begin(), out.end(), [](const Redex& x, const Redex& y) {
        return x.pos != y.pos ? x.pos < y.pos : x.len < y.len;
    });
    return out;
}

void Rewriter::apply(const GenWord& w, const Redex& r, const TruncLaurent& c, GenPoly& out) {
    GenWord pre(w.begin(), w.begin() + r.pos);
    GenWord post(w.begin() + r.pos + r.len, w.end());
    auto put = [&](const GenWord& mid, const TruncLaurent& x) {
        GenWord v = pre;
        v.insert(v.end(), mid.begin(), mid.end());
        v.insert(v.end(), post.begin(), post.end());
        TruncLaurent y = ctx_.cut(c * x);
        if (y.is_zero()) return;
        auto [it, fresh] = out.emplace(v, y);
        if (!fresh) {
            it->second += y;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    const Sym& a = w[sz(r.pos)];
    if (r.len == 2 && !(a.kind == w[sz(r.pos + 1)].kind && a.kind != 'H')) {
        const Sym& b = w[sz(r.pos + 1)];
        if (a.kind == 'H' && b.kind == 'H') {
            put({b, a}, TruncLaurent(1));
        } else if (a.kind == 'E' && b.kind == 'H') {
            put({b, a}, TruncLaurent(1));
            put({a}, -ctx_.alpha(a.index, b.index));
        } else if (a.kind == 'H' && b.kind == 'F') {
            put({b, a}, TruncLaurent(1));
            put({b}, -ctx_.alpha(b.index, a.index));
        } else {
            put({b, a}, TruncLaurent(1));
            if (a.index == b.index)
                for (const auto& [x, k] : ctx_.ef_poly_[sz(a.index)]) {
                    GenWord hs;
                    for (std::size_t g = 0; g < x.size(); ++g)
                        for (int e = 0; e < x[g]; ++e) hs.push_back({'H', static_cast<int>(g)});
                    put(hs, k);
                }
        }
        return;
    }
    Word u;
    for (int p = r.pos; p < r.pos + r.len; ++p) u.push_back(w[sz(p)].index);
    for (const auto& [v, x] : *ctx_.words(a.kind == 'E').reduce(u)) {
        GenWord mid;
        for (int l : v) mid.push_back({a.kind, l});
        put(mid, x);
    }
}

GenPoly Rewriter::rewrite(const GenPoly& p, Strategy s, std::mt19937_64* rng) {
    if (s == Strategy::Random && rng == nullptr) throw UnsupportedArgument("random strategy needs a generator");
    GenPoly pending, done;
    for (const auto& [w, c] : p) {
        TruncLaurent x = ctx_.cut(c);
        if (!x.is_zero()) pending[w] += x;
    }
    while (!pending.empty()) {
        auto it = pending.begin();
        if (s == Strategy::Random) std::advance(it, static_cast<long>((*rng)() % pending.size()));
        GenWord w = it->first;
        TruncLaurent c = it->second;
        pending.erase(it);
        if (c.is_zero()) continue;
        auto rx = redexes(w);
        if (rx.empty()) {
            auto [dt, fresh] = done.emplace(w, c);
            if (!fresh) {
                dt->second += c;
                if (dt->second.is_zero()) done.erase(dt);
            }
            continue;
        }
        const Redex& r = s == Strategy::Random ? rx[(*rng)() % rx.size()] : rx.front();
        GenPoly produced;
        apply(w, r, c, produced);
        ++steps_;
        for (const auto& [v, x] : produced) {
            auto dt = done.find(v);
            if (dt != done.end()) {
                dt->second += x;
                if (dt->second.is_zero()) done.erase(dt);
                continue;
            }
            auto [pt, fresh] = pending.emplace(v, x);
            if (!fresh) {
                pt->second += x;
                if (pt->second.is_zero()) pending.erase(pt);
            }
        }
    }
    return done;
}

UElem Rewriter::to_element(const GenPoly& p) const {
    UElem r;
    for (const auto& [w, c] : p) {
        Mono m{{}, HExp(sz(ctx_.t()), 0), {}};
        for (const Sym& s : w) {
            if (s.kind == 'F') m.f.push_back(s.index);
            else if (s.kind == 'H') ++m.h[sz(s.index)];
            else m.e.push_back(s.index);
        }
        r.add(m, c);
    }
    return r;
}

GenWord random_genword(std::mt19937_64& rng, int n, int t, int length) {
    GenWord w;
    std::uniform_int_distribution<int> pick(0, 2 * n + t - 1);
    for (int k = 0; k < length; ++k) {
        int x = pick(rng);
        if (x < n) w.push_back({'E', x});
        else if (x < 2 * n) w.push_back({'F', x - n});
        else w.push_back({'H', x - 2 * n});
    }
    return w;
}

// ---- suites ----

namespace {

std::string describe(const UElem& x, const std::vector<std::string>& labels, int limit = 3) {
    std::ostringstream os;
    int k = 0;
    for (const auto& [m, c] : x.terms) {
        if (k++ == limit) {
            os << " + ...";
            break;
        }
        os << (k > 1 ? " + " : "") << "(" << c.str() << ")" << mono_str(m, labels);
    }
    return k ? os.str() : "0";
}

std::string describe(const Tensor& x, const std::vector<std::string>& labels, int limit = 3) {
    std::ostringstream os;
    int k = 0;
    for (const auto& [key, c] : x.terms) {
        if (k++ == limit) {
            os << " + ...";
            break;
        }
        os << (k > 1 ? " + " : "") << "(" << c.str() << ")";
        for (std::size_t l = 0; l < key.size(); ++l) os << (l ? " (x) " : "") << mono_str(key[l], labels);
    }
    return k ? os.str() : "0";
}

}  // namespace

std::string describe_element(const UElem& x, const std::vector<std::string>& labels) { return describe(x, labels); }
std::string describe_tensor(const Tensor& x, const std::vector<std::string>& labels) { return describe(x, labels); }

std::vector<CheckResult> hopf_suite(QContext& ctx) {
    const int N = ctx.order();
    const auto& labels = ctx.realization().labels;
    std::vector<std::pair<std::string, UElem>> gens;
    for (int i = 0; i < ctx.n(); ++i) gens.emplace_back("E" + std::to_string(i + 1), ctx.E(i));
    for (int i = 0; i < ctx.n(); ++i) gens.emplace_back("F" + std::to_string(i + 1), ctx.F(i));
    for (int g = 0; g < ctx.t(); ++g) gens.emplace_back(sym_str({'H', g}, labels), ctx.H(g));
    std::vector<std::pair<std::string, UElem>> elems = gens;
    for (const auto& [a, x] : gens)
        for (const auto& [b, y] : gens) elems.emplace_back(a + "*" + b, ctx.mul(x, y));

    CheckResult coassoc{"coassociativity"}, counit{"counit"}, antipode{"antipode"}, relations{"coproduct_relations"};
    auto fail = [](CheckResult& r, const std::string& w) {
        if (r.ok) r.witness = w;
        r.ok = false;
    };
    for (const auto& [name, x] : elems) {
        Tensor d = ctx.coproduct(x);
        Tensor l = ctx.coproduct_leg(d, 0), r = ctx.coproduct_leg(d, 1);
        if (!l.equals_to(r, N)) fail(coassoc, name + ": " + describe(l - r, labels));
        Tensor e0 = ctx.counit_leg(d, 0), e1 = ctx.counit_leg(d, 1);
        UElem u0, u1;
        for (const auto& [k, c] : e0.terms) u0.add(k[0], c);
        for (const auto& [k, c] : e1.terms) u1.add(k[0], c);
        if (!u0.equals_to(x, N) || !u1.equals_to(x, N)) fail(counit, name);
        UElem s0 = ctx.multiply_legs(ctx.map_leg(d, 0, true));
        UElem s1 = ctx.multiply_legs(ctx.map_leg(d, 1, true));
        UElem eps = ctx.scalar(ctx.counit(x));
        if (!s0.equals_to(eps, N)) fail(antipode, name + " (S (x) id): " + describe(s0 - eps, labels));
        if (!s1.equals_to(eps, N)) fail(antipode, name + " (id (x) S): " + describe(s1 - eps, labels));
    }
    for (int i = 0; i < ctx.n(); ++i)
        for (int j = 0; j < ctx.n(); ++j) {
            Tensor de = ctx.coproduct(ctx.E(i)), df = ctx.coproduct(ctx.F(j));
            Tensor lhs = ctx.tmul(de, df) - ctx.tmul(df, de);
            Tensor rhs;
            if (i == j) rhs = ctx.coproduct(ctx.ef_rhs(i));
            if (!lhs.equals_to(rhs, N))
                fail(relations, "[E" + std::to_string(i + 1) + ",F" + std::to_string(j + 1) + "]: " +
                                    describe(lhs - rhs, labels));
        }
    return {coassoc, counit, antipode, relations};
}

std::vector<CheckResult> serre_skewprimitive_check(QContext& ctx, int i, int j) {
    const int N = ctx.order();
    const auto& R = ctx.realization();
    int m = 1 - ctx.cartan().A(i, j);
    LMat up = R.Tp.row(i) * TruncLaurent(m) + R.Tp.row(j);
    LMat dn = R.Tm.row(i) * TruncLaurent(m) + R.Tm.row(j);
    std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
    std::vector<CheckResult> out;
    UElem X = ctx.serre_element(i, j, true);
    Tensor want = tensor(X, ctx.one()) + tensor(ctx.exp_toral(up, TruncLaurent::hbar()), X);
    Tensor got = ctx.coproduct(X);
    out.push_back({"skew_primitive_E" + tag, got.equals_to(want, N), describe(got - want, R.labels)});
    UElem Y = ctx.serre_element(i, j, false);
    want = tensor(Y, ctx.exp_toral(dn, -TruncLaurent::hbar())) + tensor(ctx.one(), Y);
    got = ctx.coproduct(Y);
    out.push_back({"skew_primitive_F" + tag, got.equals_to(want, N), describe(got - want, R.labels)});
    if (out[0].ok) out[0].witness.clear();
    if (out[1].ok) out[1].witness.clear();
    return out;
}

std::vector<CheckResult> split_presentation_check(QContext& ctx) {
    const int N = ctx.order();
    const auto& R = ctx.realization();
    LMat S = R.S(), L = R.Lambda();
    CheckResult res{"split_presentation"};
    for (int i = 0; i < ctx.n(); ++i) {
        int d = ctx.cartan().d[sz(i)];
        TruncLaurent qq = ts_div_h(qpow(TruncLaurent(d), N + 2) - qpow(TruncLaurent(-d), N + 2), 1);
        UElem diff = ctx.exp_toral(S.row(i), TruncLaurent::hbar()) - ctx.exp_toral(S.row(i), -TruncLaurent::hbar());
        // diff has valuation 1; divide by hbar before dividing by (q - q^{-1}) / hbar.
        UElem scaled;
        for (const auto& [mo, c] : diff.terms) scaled.add(mo, ts_div_h(c, 1) * ts_inv(qq, N));
        UElem rhs = ctx.mul(ctx.exp_toral(L.row(i), TruncLaurent::hbar()), scaled);
        UElem lhs = ctx.commutator(ctx.E(i), ctx.F(i));
        if (!lhs.equals_to(rhs, N - 1) && res.ok) {
            res.ok = false;
            res.witness = "i=" + std::to_string(i + 1) + ": " + describe(lhs - rhs, R.labels);
        }
    }
    return {res};
}

}  // namespace mpqg
