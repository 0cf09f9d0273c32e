#include "hrkl/errors.hpp"
#include "hrkl/kernel_grammar.hpp"
#include "oracles/grammar_count.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace hrkl;

namespace {
const KernelExpr SE = KernelExpr::base(BaseKernel::SE);
const KernelExpr LIN = KernelExpr::base(BaseKernel::LIN);
const KernelExpr PER = KernelExpr::base(BaseKernel::PER);

std::set<std::string> canonical_set(std::span<const BaseKernel> bases) {
    std::set<std::string> out;
    for (const auto& e : expand(bases)) out.insert(canonicalize(e));
    return out;
}
}  // namespace

TEST_CASE("expand matches the closed-form count") {
    const std::vector<BaseKernel> one{BaseKernel::SE}, two{BaseKernel::SE, BaseKernel::PER},
        three{BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    CHECK(expand(one).size() == oracle::grammar_count(1));
    CHECK(expand(two).size() == oracle::grammar_count(2));
    CHECK(expand(three).size() == oracle::grammar_count(3));
    CHECK(expand(three).size() == 87);
    CHECK(expand(two).size() == 32);
    CHECK(expand(one).size() == 7);
    CHECK(canonical_set(three).size() == 87);
}

TEST_CASE("expand returns sorted canonical strings") {
    const std::vector<BaseKernel> three{BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    const auto ks = expand(three);
    for (std::size_t i = 1; i < ks.size(); ++i) CHECK(canonicalize(ks[i - 1]) < canonicalize(ks[i]));
    for (const auto& k : ks) CHECK(k.to_string() == canonicalize(k));
    CHECK_THROWS_AS(expand(std::span<const BaseKernel>{}), ValidationError);
}

TEST_CASE("expand per form") {
    const std::vector<BaseKernel> three{BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    const Form single[] = {Form::A};
    CHECK(expand(three, single).size() == 3);
    const Form pair[] = {Form::SumAB};
    CHECK(expand(three, pair).size() == 6);
    const Form triple[] = {Form::SumAB_ProdC};
    CHECK(expand(three, triple).size() == 18);
}

TEST_CASE("canonicalize is commutative within a pair") {
    CHECK(canonicalize(LIN * SE) == "SE*LIN");
    CHECK(canonicalize(SE * LIN) == "SE*LIN");
    CHECK(canonicalize(PER * SE + LIN) == "LIN+PER*SE");
    CHECK(canonicalize(LIN + SE * PER) == "LIN+PER*SE");
    CHECK(canonicalize((SE * LIN) * PER) != canonicalize((SE * PER) * LIN));
    CHECK(canonicalize((SE * LIN) * PER) == "PER*(SE*LIN)");
    CHECK(canonicalize((SE + LIN) * PER) == "PER*(SE+LIN)");
    CHECK(canonicalize((SE + PER) + SE) == "SE+(PER+SE)");
}

TEST_CASE("parse_kernel round trips canonical strings") {
    const std::vector<BaseKernel> three{BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    for (const auto& k : expand(three)) CHECK(canonicalize(parse_kernel(canonicalize(k))) == canonicalize(k));
    CHECK(canonicalize(parse_kernel(" LIN + PER * SE ")) == "LIN+PER*SE");
    CHECK(parse_kernel("SE+LIN*PER").op() == KernelExpr::Op::Sum);
    CHECK(parse_kernel("(SE+LIN)*PER").op() == KernelExpr::Op::Product);
    CHECK_THROWS_AS(parse_kernel("SE+"), ParseError);
    CHECK_THROWS_AS(parse_kernel("RQ"), ParseError);
    CHECK_THROWS_AS(parse_kernel("(SE*LIN"), ParseError);
    CHECK_THROWS_AS(parse_base_kernel("se"), ParseError);
}

TEST_CASE("param_layout counts") {
    CHECK(param_layout(SE).count() == 3);
    CHECK(param_layout(LIN).count() == 3);
    CHECK(param_layout(PER).count() == 4);
    CHECK(param_layout(PER * SE + LIN).count() == 8);
    const auto layout = param_layout(PER * SE);
    CHECK(layout.slots[0].name == "PER[0].log_variance");
    CHECK(layout.slots[2].role == ParamRole::LogPeriod);
    CHECK(layout.slots[3].name == "SE[1].log_variance");
    CHECK(layout.slots.back().name == "noise.log_variance");
    CHECK(layout.slots.back().role == ParamRole::LogNoise);
}

TEST_CASE("describe rule table") {
    using V = std::vector<std::string>;
    CHECK(describe(parse_kernel("PER*SE+LIN")) == V{"a linear function", "a periodic function whose shape changes smoothly"});
    CHECK(describe(parse_kernel("PER+SE")) == V{"a periodic function", "a smooth function"});
    CHECK(describe(parse_kernel("PER*PER+SE*PER")) ==
          V{"a periodic function modulated by a periodic function", "a periodic function whose shape changes smoothly"});
    CHECK(describe(SE * SE) == V{"a smooth function"});
    CHECK(describe(LIN * LIN) == V{"a quadratic function"});
    CHECK(describe(SE * LIN) == V{"a smooth function with linearly varying amplitude"});
    CHECK(describe(PER * LIN) == V{"a periodic function with linearly varying amplitude"});
    CHECK(describe((PER * SE) * LIN) ==
          V{"a periodic function whose shape changes smoothly with linearly varying amplitude"});
}

TEST_CASE("describe has one sentence per distributed product term") {
    std::function<std::size_t(const KernelExpr&)> terms = [&](const KernelExpr& e) -> std::size_t {
        switch (e.op()) {
            case KernelExpr::Op::Base: return 1;
            case KernelExpr::Op::Sum: return terms(e.left()) + terms(e.right());
            case KernelExpr::Op::Product: return terms(e.left()) * terms(e.right());
        }
        return 0;
    };
    const std::vector<BaseKernel> three{BaseKernel::SE, BaseKernel::LIN, BaseKernel::PER};
    for (const auto& k : expand(three)) CHECK(describe(k).size() == terms(k));
    CHECK(describe(parse_kernel("(SE+LIN)*(PER+SE)")).size() == 4);
}

TEST_CASE("Grammar defaults and parsing") {
    CHECK(Grammar::defaults().candidates().size() == 87);
    const Grammar g = Grammar::parse("# two bases\nbase SE\nbase PER\n");
    CHECK(g.candidates().size() == 32);
    const Grammar h = Grammar::parse("base SE\nbase LIN\nform a\nform a+b\nkernel PER*SE\n");
    std::vector<std::string> names;
    for (const auto& k : h.candidates()) names.push_back(canonicalize(k));
    CHECK(names == std::vector<std::string>{"LIN", "LIN+LIN", "PER*SE", "SE", "SE+LIN", "SE+SE"});
    const Grammar only = Grammar::parse("kernel LIN+SE*PER\n");
    REQUIRE(only.candidates().size() == 1);
    CHECK(canonicalize(only.candidates()[0]) == "LIN+PER*SE");
    CHECK_THROWS_AS(Grammar::parse("bases SE\n"), ParseError);
    CHECK_THROWS_AS(Grammar::parse("form a\n"), ValidationError);
    CHECK_THROWS_AS(Grammar::load("/nonexistent/grammar.txt"), IoError);
}
