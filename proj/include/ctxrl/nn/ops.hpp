#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ctxrl/nn/tape.hpp"

// Differentiable primitives. Binary elementwise ops broadcast an operand whose
// rows or columns equal 1; gradients are summed back over broadcast axes.

namespace ctxrl::nn {

namespace detail {

inline Eigen::Index broadcast_extent(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a == b || b == 1) return a;
  if (a == 1) return b;
  throw DimensionError(std::string(op) + ": cannot broadcast " + std::to_string(a) + " against " +
                       std::to_string(b));
}

template <typename Scalar>
TensorX<Scalar> broadcast(const TensorX<Scalar>& t, Eigen::Index rows, Eigen::Index cols) {
  if (t.rows() == rows && t.cols() == cols) return t;
  return t.replicate(rows / t.rows(), cols / t.cols());
}

template <typename Scalar>
TensorX<Scalar> reduce_to(const TensorX<Scalar>& g, Eigen::Index rows, Eigen::Index cols) {
  if (g.rows() == rows && g.cols() == cols) return g;
  TensorX<Scalar> out = g;
  if (rows == 1 && g.rows() != 1) out = out.colwise().sum().eval();
  if (cols == 1 && g.cols() != 1) out = out.rowwise().sum().eval();
  return out;
}

template <typename Scalar>
void require_same_tape(BasicVar<Scalar> a, BasicVar<Scalar> b, const char* op) {
  if (a.tape != b.tape) throw ContractError(std::string(op) + ": operands live on different tapes");
}

}  // namespace detail

template <typename Scalar>
BasicVar<Scalar> matmul(BasicVar<Scalar> a, BasicVar<Scalar> b) {
  detail::require_same_tape(a, b, "matmul");
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + shape_string(a.value()) + " x " + shape_string(b.value()));
  }
  TensorX<Scalar> out;
  out.noalias() = a.value() * b.value();
  return a.tape->record(std::move(out), {a, b},
                        [a, b](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
                          if (t.requires_grad(a)) t.accumulate(a.id, g * b.value().transpose());
                          if (t.requires_grad(b)) t.accumulate(b.id, a.value().transpose() * g);
                        });
}

/// x * W + b with b a 1 x out row broadcast over the batch.
template <typename Scalar>
BasicVar<Scalar> affine(BasicVar<Scalar> x, BasicVar<Scalar> w, BasicVar<Scalar> b) {
  detail::require_same_tape(x, w, "affine");
  detail::require_same_tape(x, b, "affine");
  if (x.cols() != w.rows() || b.rows() != 1 || b.cols() != w.cols()) {
    throw DimensionError("affine: input " + shape_string(x.value()) + ", weight " +
                         shape_string(w.value()) + ", bias " + shape_string(b.value()));
  }
  TensorX<Scalar> out(x.rows(), w.cols());
  out.noalias() = x.value() * w.value();
  out.rowwise() += b.value().row(0);
  return x.tape->record(std::move(out), {x, w, b},
                        [x, w, b](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
                          if (t.requires_grad(x)) t.accumulate(x.id, g * w.value().transpose());
                          if (t.requires_grad(w)) t.accumulate(w.id, x.value().transpose() * g);
                          if (t.requires_grad(b)) t.accumulate(b.id, g.colwise().sum());
                        });
}

template <typename Scalar>
BasicVar<Scalar> add(BasicVar<Scalar> a, BasicVar<Scalar> b) {
  detail::require_same_tape(a, b, "add");
  const auto r = detail::broadcast_extent(a.rows(), b.rows(), "add");
  const auto c = detail::broadcast_extent(a.cols(), b.cols(), "add");
  TensorX<Scalar> out = detail::broadcast(a.value(), r, c) + detail::broadcast(b.value(), r, c);
  return a.tape->record(std::move(out), {a, b}, [a, b](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, detail::reduce_to(g, a.rows(), a.cols()));
    t.accumulate(b.id, detail::reduce_to(g, b.rows(), b.cols()));
  });
}

template <typename Scalar>
BasicVar<Scalar> sub(BasicVar<Scalar> a, BasicVar<Scalar> b) {
  detail::require_same_tape(a, b, "sub");
  const auto r = detail::broadcast_extent(a.rows(), b.rows(), "sub");
  const auto c = detail::broadcast_extent(a.cols(), b.cols(), "sub");
  TensorX<Scalar> out = detail::broadcast(a.value(), r, c) - detail::broadcast(b.value(), r, c);
  return a.tape->record(std::move(out), {a, b}, [a, b](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, detail::reduce_to(g, a.rows(), a.cols()));
    t.accumulate(b.id, -detail::reduce_to(g, b.rows(), b.cols()));
  });
}

template <typename Scalar>
BasicVar<Scalar> mul(BasicVar<Scalar> a, BasicVar<Scalar> b) {
  detail::require_same_tape(a, b, "mul");
  const auto r = detail::broadcast_extent(a.rows(), b.rows(), "mul");
  const auto c = detail::broadcast_extent(a.cols(), b.cols(), "mul");
  TensorX<Scalar> out =
      detail::broadcast(a.value(), r, c).cwiseProduct(detail::broadcast(b.value(), r, c));
  return a.tape->record(std::move(out), {a, b}, [a, b, r, c](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    if (t.requires_grad(a)) {
      t.accumulate(a.id, detail::reduce_to<Scalar>(
                             g.cwiseProduct(detail::broadcast(b.value(), r, c)), a.rows(), a.cols()));
    }
    if (t.requires_grad(b)) {
      t.accumulate(b.id, detail::reduce_to<Scalar>(
                             g.cwiseProduct(detail::broadcast(a.value(), r, c)), b.rows(), b.cols()));
    }
  });
}

template <typename Scalar>
BasicVar<Scalar> operator+(BasicVar<Scalar> a, BasicVar<Scalar> b) { return add(a, b); }
template <typename Scalar>
BasicVar<Scalar> operator-(BasicVar<Scalar> a, BasicVar<Scalar> b) { return sub(a, b); }
template <typename Scalar>
BasicVar<Scalar> operator*(BasicVar<Scalar> a, BasicVar<Scalar> b) { return mul(a, b); }

template <typename Scalar>
BasicVar<Scalar> scale(BasicVar<Scalar> a, Scalar s) {
  TensorX<Scalar> out = a.value() * s;
  return a.tape->record(std::move(out), {a}, [a, s](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g * s);
  });
}

template <typename Scalar>
BasicVar<Scalar> add_scalar(BasicVar<Scalar> a, Scalar s) {
  TensorX<Scalar> out = a.value().array() + s;
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g);
  });
}

template <typename Scalar>
BasicVar<Scalar> operator-(BasicVar<Scalar> a) { return scale(a, Scalar(-1)); }

template <typename Scalar>
BasicVar<Scalar> relu(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().cwiseMax(Scalar(0));
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, (a.value().array() > Scalar(0)).select(g, Scalar(0)).matrix());
  });
}

template <typename Scalar>
BasicVar<Scalar> tanh(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().array().tanh();
  const std::size_t self = a.tape->size();
  return a.tape->record(std::move(out), {a}, [a, self](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    const auto& y = t.value(BasicVar<Scalar>{&t, self});
    t.accumulate(a.id, (g.array() * (Scalar(1) - y.array().square())).matrix());
  });
}

template <typename Scalar>
BasicVar<Scalar> sigmoid(BasicVar<Scalar> a) {
  TensorX<Scalar> out = (Scalar(1) + (-a.value().array()).exp()).inverse();
  const std::size_t self = a.tape->size();
  return a.tape->record(std::move(out), {a}, [a, self](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    const auto& y = t.value(BasicVar<Scalar>{&t, self});
    t.accumulate(a.id, (g.array() * y.array() * (Scalar(1) - y.array())).matrix());
  });
}

template <typename Scalar>
BasicVar<Scalar> exp(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().array().exp();
  const std::size_t self = a.tape->size();
  return a.tape->record(std::move(out), {a}, [a, self](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g.cwiseProduct(t.value(BasicVar<Scalar>{&t, self})));
  });
}

template <typename Scalar>
BasicVar<Scalar> log(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().array().log();
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g.cwiseQuotient(a.value()));
  });
}

/// log(1 + exp(x)), evaluated without overflow.
template <typename Scalar>
BasicVar<Scalar> softplus(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().unaryExpr([](Scalar x) {
    return std::max(x, Scalar(0)) + std::log1p(std::exp(-std::abs(x)));
  });
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g.cwiseProduct(a.value().unaryExpr(
                           [](Scalar x) { return Scalar(1) / (Scalar(1) + std::exp(-x)); })));
  });
}

template <typename Scalar>
BasicVar<Scalar> square(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().array().square();
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, Scalar(2) * g.cwiseProduct(a.value()));
  });
}

/// Gradient passes where lo <= x <= hi and is zero outside.
template <typename Scalar>
BasicVar<Scalar> clamp(BasicVar<Scalar> a, Scalar lo, Scalar hi) {
  TensorX<Scalar> out = a.value().cwiseMax(lo).cwiseMin(hi);
  return a.tape->record(std::move(out), {a}, [a, lo, hi](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    const auto& x = a.value().array();
    t.accumulate(a.id, ((x >= lo) && (x <= hi)).select(g, Scalar(0)).matrix());
  });
}

/// Elementwise minimum of equal-shape operands; ties route the gradient to `a`.
template <typename Scalar>
BasicVar<Scalar> minimum(BasicVar<Scalar> a, BasicVar<Scalar> b) {
  detail::require_same_tape(a, b, "minimum");
  require_same_shape(a.value(), b.value(), "minimum");
  TensorX<Scalar> out = a.value().cwiseMin(b.value());
  return a.tape->record(std::move(out), {a, b}, [a, b](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    const auto pick_a = (a.value().array() <= b.value().array());
    t.accumulate(a.id, pick_a.select(g, Scalar(0)).matrix());
    t.accumulate(b.id, pick_a.select(Scalar(0), g).matrix());
  });
}

template <typename Scalar>
BasicVar<Scalar> sum(BasicVar<Scalar> a) {
  TensorX<Scalar> out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, TensorX<Scalar>::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

template <typename Scalar>
BasicVar<Scalar> mean(BasicVar<Scalar> a) {
  const Scalar n = static_cast<Scalar>(a.value().size());
  if (n == 0) throw DimensionError("mean: empty tensor");
  TensorX<Scalar> out(1, 1);
  out(0, 0) = a.value().sum() / n;
  return a.tape->record(std::move(out), {a}, [a, n](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, TensorX<Scalar>::Constant(a.rows(), a.cols(), g(0, 0) / n));
  });
}

/// Sum over columns: [B, d] -> [B, 1].
template <typename Scalar>
BasicVar<Scalar> row_sum(BasicVar<Scalar> a) {
  TensorX<Scalar> out = a.value().rowwise().sum();
  return a.tape->record(std::move(out), {a}, [a](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    t.accumulate(a.id, g.replicate(1, a.cols()));
  });
}

/// Averages consecutive blocks of `group` rows: [B * group, d] -> [B, d].
template <typename Scalar>
BasicVar<Scalar> mean_groups(BasicVar<Scalar> a, Eigen::Index group) {
  if (group <= 0 || a.rows() % group != 0) {
    throw DimensionError("mean_groups: " + std::to_string(a.rows()) + " rows not divisible by " +
                         std::to_string(group));
  }
  const Eigen::Index blocks = a.rows() / group;
  TensorX<Scalar> out(blocks, a.cols());
  for (Eigen::Index b = 0; b < blocks; ++b) {
    out.row(b) = a.value().middleRows(b * group, group).colwise().mean();
  }
  return a.tape->record(std::move(out), {a}, [a, group, blocks](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    TensorX<Scalar> ga(a.rows(), a.cols());
    const Scalar inv = Scalar(1) / static_cast<Scalar>(group);
    for (Eigen::Index b = 0; b < blocks; ++b) {
      ga.middleRows(b * group, group).rowwise() = g.row(b) * inv;
    }
    t.accumulate(a.id, ga);
  });
}

/// Concatenates along the feature axis. All parts share the row count.
template <typename Scalar>
BasicVar<Scalar> concat_cols(std::span<const BasicVar<Scalar>> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    detail::require_same_tape(parts.front(), p, "concat_cols");
    if (p.rows() != rows) throw DimensionError("concat_cols: row counts differ");
    cols += p.cols();
  }
  TensorX<Scalar> out(rows, cols);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.middleCols(off, p.cols()) = p.value();
    off += p.cols();
  }
  std::vector<BasicVar<Scalar>> inputs(parts.begin(), parts.end());
  auto& tape = *parts.front().tape;
  // Wire a single-input record for arbitrary arity by tagging the first
  // gradient-tracking part; the backward closure handles all of them.
  BasicVar<Scalar> anchor = parts.front();
  for (const auto& p : parts) {
    if (p.requires_grad()) {
      anchor = p;
      break;
    }
  }
  return tape.record(std::move(out), {anchor}, [inputs](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    Eigen::Index o = 0;
    for (const auto& p : inputs) {
      if (t.requires_grad(p)) t.accumulate(p.id, g.middleCols(o, p.cols()));
      o += p.cols();
    }
  });
}

template <typename Scalar>
BasicVar<Scalar> concat_cols(std::initializer_list<BasicVar<Scalar>> parts) {
  return concat_cols(std::span<const BasicVar<Scalar>>(parts.begin(), parts.size()));
}

template <typename Scalar>
BasicVar<Scalar> slice_cols(BasicVar<Scalar> a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(start) + ", +" + std::to_string(count) +
                         ") out of " + shape_string(a.value()));
  }
  TensorX<Scalar> out = a.value().middleCols(start, count);
  return a.tape->record(std::move(out), {a}, [a, start, count](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    TensorX<Scalar> ga = TensorX<Scalar>::Zero(a.rows(), a.cols());
    ga.middleCols(start, count) = g;
    t.accumulate(a.id, ga);
  });
}

template <typename Scalar>
BasicVar<Scalar> slice_rows(BasicVar<Scalar> a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) {
    throw DimensionError("slice_rows: [" + std::to_string(start) + ", +" + std::to_string(count) +
                         ") out of " + shape_string(a.value()));
  }
  TensorX<Scalar> out = a.value().middleRows(start, count);
  return a.tape->record(std::move(out), {a}, [a, start, count](BasicTape<Scalar>& t, const TensorX<Scalar>& g) {
    TensorX<Scalar> ga = TensorX<Scalar>::Zero(a.rows(), a.cols());
    ga.middleRows(start, count) = g;
    t.accumulate(a.id, ga);
  });
}

/// Copy of `a` with the gradient path cut.
template <typename Scalar>
BasicVar<Scalar> detach(BasicVar<Scalar> a) {
  return a.tape->constant(a.value());
}

}  // namespace ctxrl::nn
