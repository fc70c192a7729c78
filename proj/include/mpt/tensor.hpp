// Copyright 2026 The mptnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpt {

using Shape = std::vector<int64_t>;

std::string shape_str(const Shape& s);
int64_t shape_numel(const Shape& s);

/// I/O failures carry their own type so callers can map them to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;
  std::vector<double> grad;  // empty until first accumulation

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  }
};

using TensorImplPtr = std::shared_ptr<TensorImpl>;

/// Dense row-major n-d array of doubles. Value-semantic handle over a shared
/// buffer; ops create fresh outputs and record backward rules on the active
/// Tape when any input requires grad.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor from(Shape shape, std::vector<double> data);
  static Tensor scalar(double value) { return from({1}, {value}); }

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  int rank() const { return static_cast<int>(impl_->shape.size()); }
  int64_t dim(int i) const { return impl_->shape[static_cast<size_t>(i)]; }
  int64_t size() const { return static_cast<int64_t>(impl_->data.size()); }

  std::vector<double>& data() { return impl_->data; }
  const std::vector<double>& data() const { return impl_->data; }
  double item() const;

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool v) {
    impl_->requires_grad = v;
    return *this;
  }

  bool has_grad() const { return !impl_->grad.empty(); }
  const std::vector<double>& grad() const;
  std::vector<double>& mutable_grad();
  void zero_grad() {
    if (!impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0);
  }

  TensorImplPtr impl() const { return impl_; }

 private:
  explicit Tensor(TensorImplPtr impl) : impl_(std::move(impl)) {}
  TensorImplPtr impl_;
};

/// Reverse-mode tape: ops append backward closures in forward order; backward
/// replays them in reverse once. Re-entry without reset is an error.
class Tape {
 public:
  void record(std::function<void()> backward_fn) {
    nodes_.push_back(std::move(backward_fn));
  }
  void backward(const Tensor& loss);
  void reset() {
    nodes_.clear();
    consumed_ = false;
  }
  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  std::vector<std::function<void()>> nodes_;
  bool consumed_ = false;
};

Tape* active_tape();

/// RAII guard making a Tape the active one for the current thread.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* prev_;
};

/// Returns the active tape iff any of the given tensors requires grad.
Tape* tape_for(std::initializer_list<const Tensor*> inputs);

bool finite_checks_enabled();

/// Scoped toggle for non-finite output detection (on by default; training
/// loops turn it off in the hot path and check the loss scalar instead).
class FiniteCheckScope {
 public:
  explicit FiniteCheckScope(bool enabled);
  ~FiniteCheckScope();

 private:
  bool prev_;
};

void check_finite(const Tensor& t, const char* what);

}  // namespace mpt
