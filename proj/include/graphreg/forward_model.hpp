#pragma once

#include "graphreg/radon.hpp"
#include "graphreg/types.hpp"

#include <memory>
#include <span>
#include <string_view>

namespace graphreg {

/// A (possibly nonlinear) forward operator F together with the adjoint of
/// its Frechet derivative, F'(u)^* w.
class ForwardModel {
public:
    virtual ~ForwardModel() = default;

    [[nodiscard]] virtual std::size_t image_pixels() const = 0;
    [[nodiscard]] virtual std::size_t n_measurements() const = 0;

    virtual void apply(std::span<const double> u, std::span<double> out) const = 0;
    virtual void derivative_adjoint(std::span<const double> u, std::span<const double> w,
                                    std::span<double> out) const = 0;

    /// The linear CT operator the model is built on.
    [[nodiscard]] virtual const RadonOperator& radon() const = 0;
    [[nodiscard]] virtual bool is_linear() const = 0;
    [[nodiscard]] virtual std::string_view name() const = 0;

    [[nodiscard]] Sinogram apply(const Image& u) const;
    [[nodiscard]] Image derivative_adjoint(const Image& u, const Sinogram& w) const;
};

/// F(u) = A u with A the Radon system matrix; F'(u)^* = A^T.
class LinearCtModel final : public ForwardModel {
public:
    explicit LinearCtModel(std::shared_ptr<const RadonOperator> radon);

    [[nodiscard]] std::size_t image_pixels() const override { return radon_->image_pixels(); }
    [[nodiscard]] std::size_t n_measurements() const override { return radon_->n_measurements(); }
    using ForwardModel::apply;
    using ForwardModel::derivative_adjoint;
    void apply(std::span<const double> u, std::span<double> out) const override;
    void derivative_adjoint(std::span<const double> u, std::span<const double> w,
                            std::span<double> out) const override;
    [[nodiscard]] const RadonOperator& radon() const override { return *radon_; }
    [[nodiscard]] bool is_linear() const override { return true; }
    [[nodiscard]] std::string_view name() const override { return "xray_ct"; }

private:
    std::shared_ptr<const RadonOperator> radon_;
};

/// Intensity-only tomography: F_p(u) = (A u)^2 element-wise, with
/// F_p'(u) h = 2 (A u) * (A h) and F_p'(u)^* w = 2 A^T((A u) * w).
class PhaseRetrievalOperator final : public ForwardModel {
public:
    explicit PhaseRetrievalOperator(std::shared_ptr<const RadonOperator> inner);

    [[nodiscard]] std::size_t image_pixels() const override { return inner_->image_pixels(); }
    [[nodiscard]] std::size_t n_measurements() const override { return inner_->n_measurements(); }
    using ForwardModel::apply;
    using ForwardModel::derivative_adjoint;
    void apply(std::span<const double> u, std::span<double> out) const override;
    void derivative_adjoint(std::span<const double> u, std::span<const double> w,
                            std::span<double> out) const override;
    /// F_p'(u) h
    void derivative(std::span<const double> u, std::span<const double> h, std::span<double> out) const;
    [[nodiscard]] const RadonOperator& radon() const override { return *inner_; }
    [[nodiscard]] bool is_linear() const override { return false; }
    [[nodiscard]] std::string_view name() const override { return "phase_retrieval"; }

private:
    std::shared_ptr<const RadonOperator> inner_;
};

[[nodiscard]] Sinogram pr_forward(const PhaseRetrievalOperator& op, const Image& u);
[[nodiscard]] Image pr_derivative_adjoint_apply(const PhaseRetrievalOperator& op, const Image& u,
                                                const Sinogram& w);

}  // namespace graphreg
