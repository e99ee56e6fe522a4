#include "mpqg/expr.hpp"

#include <cctype>

#include "mpqg/errors.hpp"

namespace mpqg {

namespace {

GenPoly scalar(const TruncLaurent& c) {
    GenPoly p;
    if (!c.is_zero()) p[GenWord{}] = c;
    return p;
}

void add_to(GenPoly& p, const GenWord& w, const TruncLaurent& c) {
    auto it = p.find(w);
    if (it == p.end()) {
        if (!c.is_zero()) p.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

class Parser {
public:
    Parser(const std::string& src, const Realization& R, int order) : s_(src), R_(R), N_(order) {}

    GenPoly run() {
        GenPoly p = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError("position " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    GenPoly sum() {
        GenPoly p = product();
        while (true) {
            if (eat('+')) {
                for (const auto& [w, c] : product()) add_to(p, w, c);
            } else if (eat('-')) {
                for (const auto& [w, c] : product()) add_to(p, w, -c);
            } else {
                return p;
            }
        }
    }

    GenPoly product() {
        GenPoly p = unary();
        while (eat('*')) p = mul(p, unary());
        return p;
    }

    GenPoly unary() {
        if (eat('-')) {
            GenPoly p = unary();
            for (auto& [w, c] : p) c = -c;
            return p;
        }
        return atom();
    }

    GenPoly mul(const GenPoly& a, const GenPoly& b) const {
        GenPoly out;
        for (const auto& [u, c] : a)
            for (const auto& [v, d] : b) {
                GenWord w = u;
                w.insert(w.end(), v.begin(), v.end());
                TruncLaurent x = c * d;
                if (!x.exact()) x = x.truncated(N_);
                add_to(out, w, x);
            }
        return out;
    }

    int index(int limit, const std::string& what) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an index after " + what);
        int i = std::stoi(s_.substr(start, pos_ - start));
        if (i < 1 || i > limit)
            throw IndexOutOfRange(what + std::to_string(i) + " at position " + std::to_string(start + 1));
        return i - 1;
    }

    GenPoly toral(const LMat& row) const {
        GenPoly p;
        for (int g = 0; g < R_.t; ++g) add_to(p, GenWord{Sym{'H', g}}, row(0, g));
        return p;
    }

    GenPoly exp_of(const GenPoly& x, std::size_t at) const {
        for (const auto& [w, c] : x) {
            for (const Sym& s : w)
                if (s.kind != 'H')
                    throw ExpArgument("position " + std::to_string(at + 1) + ": argument is not toral");
            if (c.valuation() < 1)
                throw ExpArgument("position " + std::to_string(at + 1) + ": argument needs hbar-valuation >= 1");
        }
        GenPoly out = scalar(TruncLaurent(1)), power = out;
        for (int k = 1; k <= N_; ++k) {
            power = mul(power, x);
            for (auto& [w, c] : power) c = (c * Rational(1, k)).truncated(N_);
            for (const auto& [w, c] : power) add_to(out, w, c);
        }
        for (auto& [w, c] : out) c = c.truncated(N_);
        return out;
    }

    GenPoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const std::size_t start = pos_;
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            GenPoly p = sum();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string lit = s_.substr(start, pos_ - start);
            if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
                std::size_t d = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                lit += "/" + s_.substr(d, pos_ - d);
            }
            return scalar(TruncLaurent(Rational::parse(lit)));
        }
        if (s_.compare(pos_, 4, "hbar") == 0) {
            pos_ += 4;
            return scalar(TruncLaurent::hbar());
        }
        if (s_.compare(pos_, 3, "exp") == 0) {
            pos_ += 3;
            if (!eat('(')) fail("expected '(' after exp");
            GenPoly x = sum();
            if (!eat(')')) fail("expected ')'");
            return exp_of(x, start);
        }
        ++pos_;
        switch (c) {
            case 'h':
                return scalar(TruncLaurent::hbar());
            case 'E':
                return GenPoly{{GenWord{Sym{'E', index(R_.n(), "E")}}, TruncLaurent(1)}};
            case 'F':
                return GenPoly{{GenWord{Sym{'F', index(R_.n(), "F")}}, TruncLaurent(1)}};
            case 'H':
                return GenPoly{{GenWord{Sym{'H', index(R_.t, "H")}}, TruncLaurent(1)}};
            case 'S':
                return toral(R_.S().row(index(R_.n(), "S")));
            case 'L':
                return toral(R_.Lambda().row(index(R_.n(), "L")));
            case 'T': {
                if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) fail("expected T+ or T-");
                bool plus = s_[pos_++] == '+';
                int i = index(R_.n(), plus ? "T+" : "T-");
                return toral(plus ? LMat(R_.Tp.row(i)) : LMat(R_.Tm.row(i)));
            }
            default:
                pos_ = start;
                fail("unexpected '" + std::string(1, c) + "'");
        }
    }

    const std::string& s_;
    const Realization& R_;
    int N_;
    std::size_t pos_ = 0;
};

}  // namespace

GenPoly parse_expr(const std::string& src, const Realization& R, int order) {
    return Parser(src, R, order).run();
}

}  // namespace mpqg
