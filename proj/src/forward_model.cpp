#include "graphreg/forward_model.hpp"

#include "graphreg/errors.hpp"

#include <vector>

namespace graphreg {

Sinogram ForwardModel::apply(const Image& u) const {
    const auto& g = radon().geometry();
    if (u.width != g.image_size || u.height != g.image_size) {
        throw DimensionError("forward model: image shape mismatch");
    }
    Sinogram out(g.n_angles, g.n_detectors);
    apply(u.values, out.values);
    return out;
}

Image ForwardModel::derivative_adjoint(const Image& u, const Sinogram& w) const {
    const auto& g = radon().geometry();
    if (u.width != g.image_size || u.height != g.image_size) {
        throw DimensionError("forward model: image shape mismatch");
    }
    if (w.n_rows != g.n_angles || w.n_cols != g.n_detectors) {
        throw DimensionError("forward model: sinogram shape mismatch");
    }
    Image out(g.image_size, g.image_size);
    derivative_adjoint(u.values, w.values, out.values);
    return out;
}

LinearCtModel::LinearCtModel(std::shared_ptr<const RadonOperator> radon) : radon_(std::move(radon)) {
    if (!radon_) {
        throw ConfigError("LinearCtModel: null operator");
    }
}

void LinearCtModel::apply(std::span<const double> u, std::span<double> out) const { radon_->forward(u, out); }

void LinearCtModel::derivative_adjoint(std::span<const double> u, std::span<const double> w,
                                       std::span<double> out) const {
    if (u.size() != image_pixels()) {
        throw DimensionError("LinearCtModel: image size mismatch");
    }
    radon_->adjoint(w, out);
}

PhaseRetrievalOperator::PhaseRetrievalOperator(std::shared_ptr<const RadonOperator> inner)
    : inner_(std::move(inner)) {
    if (!inner_) {
        throw ConfigError("PhaseRetrievalOperator: null operator");
    }
}

void PhaseRetrievalOperator::apply(std::span<const double> u, std::span<double> out) const {
    inner_->forward(u, out);
    for (double& y : out) {
        y *= y;
    }
}

void PhaseRetrievalOperator::derivative(std::span<const double> u, std::span<const double> h,
                                        std::span<double> out) const {
    std::vector<double> y(n_measurements());
    inner_->forward(u, y);
    inner_->forward(h, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= 2.0 * y[i];
    }
}

void PhaseRetrievalOperator::derivative_adjoint(std::span<const double> u, std::span<const double> w,
                                                std::span<double> out) const {
    if (w.size() != n_measurements()) {
        throw DimensionError("PhaseRetrievalOperator: sinogram size mismatch");
    }
    std::vector<double> y(n_measurements());
    inner_->forward(u, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] *= 2.0 * w[i];
    }
    inner_->adjoint(y, out);
}

Sinogram pr_forward(const PhaseRetrievalOperator& op, const Image& u) { return op.apply(u); }

Image pr_derivative_adjoint_apply(const PhaseRetrievalOperator& op, const Image& u, const Sinogram& w) {
    return op.derivative_adjoint(u, w);
}

}  // namespace graphreg
