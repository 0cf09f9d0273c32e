#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hrkl {

enum class BaseKernel { SE, LIN, PER };

std::string_view to_string(BaseKernel b) noexcept;
/// Throws ParseError for anything other than SE, LIN, PER.
BaseKernel parse_base_kernel(std::string_view name);

/// Immutable kernel expression tree: base kernels combined by sums and
/// products. Copies share structure.
class KernelExpr {
public:
    enum class Op { Base, Sum, Product };

    static KernelExpr base(BaseKernel b);
    static KernelExpr sum(KernelExpr left, KernelExpr right);
    static KernelExpr product(KernelExpr left, KernelExpr right);

    Op op() const noexcept;
    BaseKernel base_kind() const;  // requires op() == Base
    const KernelExpr& left() const;
    const KernelExpr& right() const;
    std::size_t leaf_count() const noexcept;

    /// Expression text exactly as built (no operand reordering).
    std::string to_string() const;

private:
    struct Node;
    explicit KernelExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

inline KernelExpr operator+(KernelExpr a, KernelExpr b) { return KernelExpr::sum(std::move(a), std::move(b)); }
inline KernelExpr operator*(KernelExpr a, KernelExpr b) { return KernelExpr::product(std::move(a), std::move(b)); }

/// Canonical identity string. Both operands of every sum and product are
/// ordered by (leaf count, then token order with PER < SE < LIN); nesting is
/// preserved, so associativity is never flattened. Examples: "SE*LIN",
/// "LIN+PER*SE", "PER*(SE*LIN)".
std::string canonicalize(const KernelExpr& e);

/// The same tree with operands reordered into canonical order.
KernelExpr canonical_form(const KernelExpr& e);

/// Parses expressions such as "LIN + PER*SE" or "PER*(SE+LIN)". `*` binds
/// tighter than `+`; chains associate to the left.
KernelExpr parse_kernel(std::string_view text);

/// The seven composition forms enumerated by `expand`.
enum class Form { A, ProdAB, SumAB, ProdAB_ProdC, SumAB_ProdC, ProdAB_SumC, SumAB_SumC };

inline constexpr Form kAllForms[] = {Form::A,           Form::ProdAB,      Form::SumAB,
                                     Form::ProdAB_ProdC, Form::SumAB_ProdC, Form::ProdAB_SumC,
                                     Form::SumAB_SumC};

std::string_view to_string(Form f) noexcept;  // "a", "a*b", "(a+b)*c", ...
Form parse_form(std::string_view text);

/// Every non-redundant instance of the given forms over `bases`. Only the
/// inner pair of a form is treated as unordered. Sorted by canonical string.
std::vector<KernelExpr> expand(std::span<const BaseKernel> bases,
                               std::span<const Form> forms = kAllForms);

enum class ParamRole { LogVariance, LogLengthscale, LogPeriod, Shift, LogNoise };

struct ParamSlot {
    std::string name;  // e.g. "PER[1].log_period", "noise.log_variance"
    ParamRole role;
};

/// Hyperparameters of an expression in depth-first leaf order, followed by
/// the observation-noise slot. SE and LIN contribute 2 slots, PER 3.
struct ParamLayout {
    std::vector<ParamSlot> slots;
    std::size_t count() const noexcept { return slots.size(); }
};

ParamLayout param_layout(const KernelExpr& e);
std::size_t base_param_count(BaseKernel b) noexcept;

/// Plain-language description: one sentence per product term of the
/// distributed sum-of-products form, fewest factors first.
std::vector<std::string> describe(const KernelExpr& e);

/// Text grammar configuration. Lines: `base <SE|LIN|PER>`, `form <form>`,
/// `kernel <expression>`; `#` starts a comment. Bases with no form lines
/// enable all seven forms.
struct Grammar {
    std::vector<BaseKernel> bases;
    std::vector<Form> forms;
    std::vector<KernelExpr> kernels;

    static Grammar defaults();
    static Grammar parse(std::string_view text);
    static Grammar load(const std::filesystem::path& path);

    /// Expanded and explicit kernels, deduplicated by canonical string, in
    /// canonical-string order.
    std::vector<KernelExpr> candidates() const;
};

}  // namespace hrkl
