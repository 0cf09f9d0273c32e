#include "hrkl/kernel_grammar.hpp"

#include "hrkl/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace hrkl {

struct KernelExpr::Node {
    Op op = Op::Base;
    BaseKernel base = BaseKernel::SE;
    std::vector<KernelExpr> children;  // empty for Base, two otherwise
    std::size_t leaves = 1;
};

std::string_view to_string(BaseKernel b) noexcept {
    switch (b) {
        case BaseKernel::SE: return "SE";
        case BaseKernel::LIN: return "LIN";
        case BaseKernel::PER: return "PER";
    }
    return "?";
}

BaseKernel parse_base_kernel(std::string_view name) {
    if (name == "SE") return BaseKernel::SE;
    if (name == "LIN") return BaseKernel::LIN;
    if (name == "PER") return BaseKernel::PER;
    throw ParseError("unknown base kernel '" + std::string(name) + "'", 1);
}

KernelExpr KernelExpr::base(BaseKernel b) {
    auto n = std::make_shared<Node>();
    n->op = Op::Base;
    n->base = b;
    return KernelExpr(std::move(n));
}

KernelExpr KernelExpr::sum(KernelExpr left, KernelExpr right) {
    auto n = std::make_shared<Node>();
    n->op = Op::Sum;
    n->leaves = left.leaf_count() + right.leaf_count();
    n->children = {std::move(left), std::move(right)};
    return KernelExpr(std::move(n));
}

KernelExpr KernelExpr::product(KernelExpr left, KernelExpr right) {
    auto n = std::make_shared<Node>();
    n->op = Op::Product;
    n->leaves = left.leaf_count() + right.leaf_count();
    n->children = {std::move(left), std::move(right)};
    return KernelExpr(std::move(n));
}

KernelExpr::Op KernelExpr::op() const noexcept { return node_->op; }

BaseKernel KernelExpr::base_kind() const {
    if (node_->op != Op::Base) throw std::logic_error("base_kind() on a composite kernel");
    return node_->base;
}

const KernelExpr& KernelExpr::left() const {
    if (node_->op == Op::Base) throw std::logic_error("left() on a base kernel");
    return node_->children[0];
}

const KernelExpr& KernelExpr::right() const {
    if (node_->op == Op::Base) throw std::logic_error("right() on a base kernel");
    return node_->children[1];
}

std::size_t KernelExpr::leaf_count() const noexcept { return node_->leaves; }

namespace {

bool needs_parens(const KernelExpr& child, KernelExpr::Op parent) {
    if (child.op() == KernelExpr::Op::Base) return false;
    return parent == KernelExpr::Op::Product || child.op() == parent;
}

std::string render(const KernelExpr& e) {
    if (e.op() == KernelExpr::Op::Base) return std::string(to_string(e.base_kind()));
    const char sym = e.op() == KernelExpr::Op::Sum ? '+' : '*';
    std::string out;
    for (int side = 0; side < 2; ++side) {
        const KernelExpr& c = side == 0 ? e.left() : e.right();
        if (side == 1) out += sym;
        if (needs_parens(c, e.op()))
            out += "(" + render(c) + ")";
        else
            out += render(c);
    }
    return out;
}

char precedence_code(BaseKernel b) {
    switch (b) {
        case BaseKernel::PER: return 'A';
        case BaseKernel::SE: return 'B';
        case BaseKernel::LIN: return 'C';
    }
    return 'Z';
}

struct Canon {
    KernelExpr tree;
    std::string key;  // rendered with bases replaced by precedence codes
};

std::string sort_key(const KernelExpr& e) {
    if (e.op() == KernelExpr::Op::Base) return std::string(1, precedence_code(e.base_kind()));
    const char sym = e.op() == KernelExpr::Op::Sum ? '+' : '*';
    std::string out;
    for (int side = 0; side < 2; ++side) {
        const KernelExpr& c = side == 0 ? e.left() : e.right();
        if (side == 1) out += sym;
        out += needs_parens(c, e.op()) ? "(" + sort_key(c) + ")" : sort_key(c);
    }
    return out;
}

Canon canon(const KernelExpr& e) {
    if (e.op() == KernelExpr::Op::Base) return {e, sort_key(e)};
    Canon a = canon(e.left());
    Canon b = canon(e.right());
    if (std::make_tuple(b.tree.leaf_count(), b.key) < std::make_tuple(a.tree.leaf_count(), a.key))
        std::swap(a, b);
    KernelExpr t = e.op() == KernelExpr::Op::Sum ? KernelExpr::sum(a.tree, b.tree)
                                                 : KernelExpr::product(a.tree, b.tree);
    return {t, sort_key(t)};
}

}  // namespace

std::string KernelExpr::to_string() const { return render(*this); }

KernelExpr canonical_form(const KernelExpr& e) { return canon(e).tree; }

std::string canonicalize(const KernelExpr& e) { return render(canonical_form(e)); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    KernelExpr parse() {
        KernelExpr e = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    KernelExpr sum() {
        KernelExpr e = product();
        while (accept('+')) e = KernelExpr::sum(e, product());
        return e;
    }

    KernelExpr product() {
        KernelExpr e = atom();
        while (accept('*')) e = KernelExpr::product(e, atom());
        return e;
    }

    KernelExpr atom() {
        skip_ws();
        if (accept('(')) {
            KernelExpr e = sum();
            if (!accept(')')) fail("missing ')'");
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a base kernel");
        std::string_view name = s_.substr(start, pos_ - start);
        if (name != "SE" && name != "LIN" && name != "PER")
            fail("unknown base kernel '" + std::string(name) + "'");
        return KernelExpr::base(parse_base_kernel(name));
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("kernel '" + std::string(s_) + "': " + msg + " at column " +
                             std::to_string(pos_ + 1),
                         1);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

KernelExpr parse_kernel(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------- forms

std::string_view to_string(Form f) noexcept {
    switch (f) {
        case Form::A: return "a";
        case Form::ProdAB: return "a*b";
        case Form::SumAB: return "a+b";
        case Form::ProdAB_ProdC: return "(a*b)*c";
        case Form::SumAB_ProdC: return "(a+b)*c";
        case Form::ProdAB_SumC: return "(a*b)+c";
        case Form::SumAB_SumC: return "(a+b)+c";
    }
    return "?";
}

Form parse_form(std::string_view text) {
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    for (Form f : kAllForms)
        if (compact == to_string(f)) return f;
    throw ParseError("unknown form '" + std::string(text) + "'", 1);
}

std::vector<KernelExpr> expand(std::span<const BaseKernel> bases, std::span<const Form> forms) {
    if (bases.empty()) throw ValidationError("expand needs at least one base kernel");
    std::vector<BaseKernel> uniq(bases.begin(), bases.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const std::size_t b = uniq.size();
    auto leaf = [&](std::size_t i) { return KernelExpr::base(uniq[i]); };

    std::map<std::string, KernelExpr> found;
    auto add = [&](const KernelExpr& e) { found.emplace(canonicalize(e), e); };

    for (Form f : forms) {
        if (f == Form::A) {
            for (std::size_t i = 0; i < b; ++i) add(leaf(i));
            continue;
        }
        // Inner pair is an unordered multiset {a, b}.
        for (std::size_t i = 0; i < b; ++i) {
            for (std::size_t j = i; j < b; ++j) {
                const KernelExpr prod = leaf(i) * leaf(j);
                const KernelExpr sum = leaf(i) + leaf(j);
                switch (f) {
                    case Form::ProdAB: add(prod); break;
                    case Form::SumAB: add(sum); break;
                    default:
                        for (std::size_t c = 0; c < b; ++c) {
                            if (f == Form::ProdAB_ProdC) add(prod * leaf(c));
                            if (f == Form::SumAB_ProdC) add(sum * leaf(c));
                            if (f == Form::ProdAB_SumC) add(prod + leaf(c));
                            if (f == Form::SumAB_SumC) add(sum + leaf(c));
                        }
                }
            }
        }
    }
    std::vector<KernelExpr> out;
    out.reserve(found.size());
    for (auto& [key, e] : found) out.push_back(canonical_form(e));
    return out;
}

// ---------------------------------------------------------------- params

std::size_t base_param_count(BaseKernel b) noexcept { return b == BaseKernel::PER ? 3 : 2; }

namespace {

void collect_params(const KernelExpr& e, std::size_t& leaf_index, std::vector<ParamSlot>& out) {
    if (e.op() != KernelExpr::Op::Base) {
        collect_params(e.left(), leaf_index, out);
        collect_params(e.right(), leaf_index, out);
        return;
    }
    const std::string prefix =
        std::string(to_string(e.base_kind())) + "[" + std::to_string(leaf_index++) + "].";
    out.push_back({prefix + "log_variance", ParamRole::LogVariance});
    switch (e.base_kind()) {
        case BaseKernel::SE: out.push_back({prefix + "log_lengthscale", ParamRole::LogLengthscale}); break;
        case BaseKernel::LIN: out.push_back({prefix + "shift", ParamRole::Shift}); break;
        case BaseKernel::PER:
            out.push_back({prefix + "log_lengthscale", ParamRole::LogLengthscale});
            out.push_back({prefix + "log_period", ParamRole::LogPeriod});
            break;
    }
}

}  // namespace

ParamLayout param_layout(const KernelExpr& e) {
    ParamLayout layout;
    std::size_t leaf_index = 0;
    collect_params(e, leaf_index, layout.slots);
    layout.slots.push_back({"noise.log_variance", ParamRole::LogNoise});
    return layout;
}

// ---------------------------------------------------------------- describe

namespace {

using Term = std::vector<BaseKernel>;

std::vector<Term> distribute(const KernelExpr& e) {
    switch (e.op()) {
        case KernelExpr::Op::Base: return {Term{e.base_kind()}};
        case KernelExpr::Op::Sum: {
            auto l = distribute(e.left());
            auto r = distribute(e.right());
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case KernelExpr::Op::Product: {
            std::vector<Term> out;
            for (const auto& a : distribute(e.left()))
                for (const auto& b : distribute(e.right())) {
                    Term t = a;
                    t.insert(t.end(), b.begin(), b.end());
                    out.push_back(std::move(t));
                }
            return out;
        }
    }
    return {};
}

std::string degree_adverb(std::size_t d) {
    static const char* words[] = {"", "linearly", "quadratically", "cubically"};
    return d < 4 ? words[d] : "polynomially";
}

std::string polynomial_noun(std::size_t d) {
    static const char* words[] = {"", "a linear function", "a quadratic function", "a cubic function"};
    return d < 4 ? words[d] : "a polynomial function of degree " + std::to_string(d);
}

std::string sentence(const Term& term) {
    const auto count = [&](BaseKernel b) {
        return static_cast<std::size_t>(std::count(term.begin(), term.end(), b));
    };
    const std::size_t per = count(BaseKernel::PER), se = count(BaseKernel::SE), lin = count(BaseKernel::LIN);

    std::string out;
    if (per > 0) {
        out = "a periodic function";
        if (per == 2) out += " modulated by a periodic function";
        if (per > 2) out += " modulated by " + std::to_string(per - 1) + " periodic functions";
        if (se > 0) out += " whose shape changes smoothly";
    } else if (se > 0) {
        out = "a smooth function";
    } else {
        return polynomial_noun(lin);
    }
    if (lin > 0) out += " with " + degree_adverb(lin) + " varying amplitude";
    return out;
}

}  // namespace

std::vector<std::string> describe(const KernelExpr& e) {
    auto terms = distribute(e);
    auto code = [](const Term& t) {
        std::string s;
        for (BaseKernel b : t) s += precedence_code(b);
        std::sort(s.begin(), s.end());
        return s;
    };
    std::stable_sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
        return std::make_tuple(a.size(), code(a)) < std::make_tuple(b.size(), code(b));
    });
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(sentence(t));
    return out;
}

// ---------------------------------------------------------------- grammar file

Grammar Grammar::defaults() {
    Grammar g;
    g.bases = {BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    g.forms.assign(std::begin(kAllForms), std::end(kAllForms));
    return g;
}

Grammar Grammar::parse(std::string_view text) {
    Grammar g;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string keyword;
        if (!(ls >> keyword)) continue;
        std::string rest;
        std::getline(ls, rest);
        const auto first = rest.find_first_not_of(" \t");
        rest = first == std::string::npos ? "" : rest.substr(first);
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
        try {
            if (keyword == "base")
                g.bases.push_back(parse_base_kernel(rest));
            else if (keyword == "form")
                g.forms.push_back(parse_form(rest));
            else if (keyword == "kernel")
                g.kernels.push_back(parse_kernel(rest));
            else
                throw ParseError("unknown keyword '" + keyword + "'", lineno);
        } catch (const ParseError& e) {
            if (e.line() == lineno) throw;
            throw ParseError(std::string(e.what()), lineno);
        }
    }
    if (!g.bases.empty() && g.forms.empty()) g.forms.assign(std::begin(kAllForms), std::end(kAllForms));
    if (g.bases.empty() && !g.forms.empty())
        throw ValidationError("grammar lists forms but no base kernels");
    if (g.bases.empty() && g.kernels.empty()) throw ValidationError("grammar defines no kernels");
    return g;
}

Grammar Grammar::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grammar file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::vector<KernelExpr> Grammar::candidates() const {
    std::map<std::string, KernelExpr> all;
    if (!bases.empty())
        for (auto& e : expand(bases, forms)) all.emplace(canonicalize(e), e);
    for (const auto& e : kernels) all.emplace(canonicalize(e), canonical_form(e));
    std::vector<KernelExpr> out;
    for (auto& [key, e] : all) out.push_back(e);
    return out;
}

}  // namespace hrkl
