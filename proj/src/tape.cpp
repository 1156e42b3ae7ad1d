#include "nsrlab/tape.hpp"

#include <algorithm>
#include <cmath>

#include "nsrlab/activations.hpp"

namespace nsrlab::ad {

Parameter::Parameter(std::string name_, Shape shape_, double fill)
    : Parameter(std::move(name_), shape_, std::vector<double>(shape_.size(), fill)) {}

Parameter::Parameter(std::string name_, Shape shape_, std::vector<double> values)
    : name(std::move(name_)), shape(shape_), value(std::move(values)) {
  if (value.size() != shape.size()) {
    throw ShapeError("Parameter " + name + ": " + std::to_string(value.size()) +
                     " values for shape " + to_string(shape));
  }
  grad.assign(value.size(), 0.0);
  adam_m.assign(value.size(), 0.0);
  adam_v.assign(value.size(), 0.0);
}

void Parameter::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

void Parameter::reset_optimizer() {
  grad.assign(value.size(), 0.0);
  adam_m.assign(value.size(), 0.0);
  adam_v.assign(value.size(), 0.0);
  step_count = 0;
}

Shape Var::shape() const { return tape_->shape(*this); }
const std::vector<double>& Var::value() const { return tape_->value(*this); }

double Var::scalar() const {
  const auto& v = value();
  if (v.size() != 1) throw ShapeError("scalar(): node has shape " + to_string(shape()));
  return v[0];
}

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParameter: return "parameter";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kAffine: return "affine";
    case OpKind::kMatVec: return "matvec";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmaxRows: return "softmax";
    case OpKind::kAbs: return "abs";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kColumn: return "column";
  }
  return "?";
}

namespace {

enum class Bcast { kFull, kScalar, kRow };

Bcast broadcast_mode(Shape operand, Shape out) {
  if (operand == out) return Bcast::kFull;
  if (operand.size() == 1) return Bcast::kScalar;
  return Bcast::kRow;
}

inline std::size_t source_index(Bcast mode, std::size_t flat, std::size_t cols) {
  switch (mode) {
    case Bcast::kFull: return flat;
    case Bcast::kScalar: return 0;
    case Bcast::kRow: return flat % cols;
  }
  return flat;
}

[[noreturn]] void shape_mismatch(OpKind kind, Shape a, Shape b) {
  throw ShapeError(std::string(op_name(kind)) + ": shapes " + to_string(a) + " and " +
                   to_string(b) + " do not conform");
}

Shape broadcast_shape(OpKind kind, Shape a, Shape b) {
  if (a == b) return a;
  if (a.size() == 1) return b;
  if (b.size() == 1) return a;
  if (b.rows == 1 && b.cols == a.cols) return a;
  if (a.rows == 1 && a.cols == b.cols) return b;
  shape_mismatch(kind, a, b);
}

}  // namespace

Tape::Node& Tape::fresh(OpKind kind) {
  if (count_ == nodes_.size()) nodes_.emplace_back();
  Node& n = nodes_[count_++];
  n.kind = kind;
  n.shape = Shape{};
  n.value.clear();
  n.partial.clear();
  n.adjoint.clear();
  n.parts.clear();
  n.lhs = n.rhs = n.index = 0;
  n.aux = 0.0;
  n.param = nullptr;
  return n;
}

Var Tape::last() { return Var(this, count_ - 1); }

void Tape::check_owner(Var v, const char* op) const {
  if (v.tape() != this || v.id() >= count_) {
    throw std::invalid_argument(std::string(op) + ": operand does not belong to this tape");
  }
}

Var Tape::constant(const Matrix& m) { return constant(m.shape(), m.values()); }

Var Tape::constant(Shape shape, std::vector<double> values) {
  if (values.size() != shape.size()) {
    throw ShapeError("constant: " + std::to_string(values.size()) + " values for shape " +
                     to_string(shape));
  }
  Node& n = fresh(OpKind::kConstant);
  n.shape = shape;
  n.value = std::move(values);
  return last();
}

Var Tape::scalar(double v) { return constant(Shape{1, 1}, {v}); }

Var Tape::column(std::span<const double> values) {
  return constant(Shape{values.size(), 1}, std::vector<double>(values.begin(), values.end()));
}

Var Tape::parameter(Parameter& p) {
  Node& n = fresh(OpKind::kParameter);
  n.shape = p.shape;
  n.value = p.value;
  n.param = &p;
  return last();
}

Var Tape::binary(OpKind kind, Var a, Var b) {
  check_owner(a, op_name(kind));
  check_owner(b, op_name(kind));
  const Node& na = nodes_[a.id()];
  const Node& nb = nodes_[b.id()];
  const Shape out = broadcast_shape(kind, na.shape, nb.shape);
  const Bcast ma = broadcast_mode(na.shape, out);
  const Bcast mb = broadcast_mode(nb.shape, out);
  Node& n = fresh(kind);
  n.shape = out;
  n.lhs = a.id();
  n.rhs = b.id();
  n.value.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double x = na.value[source_index(ma, k, out.cols)];
    const double y = nb.value[source_index(mb, k, out.cols)];
    switch (kind) {
      case OpKind::kAdd: n.value[k] = x + y; break;
      case OpKind::kSub: n.value[k] = x - y; break;
      default: n.value[k] = x * y; break;
    }
  }
  return last();
}

Var Tape::add(Var a, Var b) { return binary(OpKind::kAdd, a, b); }
Var Tape::sub(Var a, Var b) { return binary(OpKind::kSub, a, b); }
Var Tape::mul(Var a, Var b) { return binary(OpKind::kMul, a, b); }

Var Tape::affine(Var a, double scale, double shift) {
  check_owner(a, "affine");
  const Node& na = nodes_[a.id()];
  Node& n = fresh(OpKind::kAffine);
  n.shape = na.shape;
  n.lhs = a.id();
  n.aux = scale;
  n.value.resize(na.value.size());
  for (std::size_t k = 0; k < n.value.size(); ++k) n.value[k] = scale * na.value[k] + shift;
  return last();
}

Var Tape::matvec(Var m, Var v) {
  check_owner(m, "matvec");
  check_owner(v, "matvec");
  const Node& nm = nodes_[m.id()];
  const Node& nv = nodes_[v.id()];
  const bool is_vector = nv.shape.rows == 1 || nv.shape.cols == 1;
  if (!is_vector || nv.shape.size() != nm.shape.cols) {
    shape_mismatch(OpKind::kMatVec, nm.shape, nv.shape);
  }
  Node& n = fresh(OpKind::kMatVec);
  n.shape = Shape{nm.shape.rows, 1};
  n.lhs = m.id();
  n.rhs = v.id();
  n.value.assign(nm.shape.rows, 0.0);
  const std::size_t cols = nm.shape.cols;
  for (std::size_t i = 0; i < nm.shape.rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += nm.value[i * cols + j] * nv.value[j];
    n.value[i] = acc;
  }
  return last();
}

Var Tape::matmul(Var a, Var b) {
  check_owner(a, "matmul");
  check_owner(b, "matmul");
  const Node& na = nodes_[a.id()];
  const Node& nb = nodes_[b.id()];
  if (na.shape.cols != nb.shape.rows) shape_mismatch(OpKind::kMatMul, na.shape, nb.shape);
  const std::size_t m = na.shape.rows;
  const std::size_t k = na.shape.cols;
  const std::size_t p = nb.shape.cols;
  Node& n = fresh(OpKind::kMatMul);
  n.shape = Shape{m, p};
  n.lhs = a.id();
  n.rhs = b.id();
  n.value.assign(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const double av = na.value[i * k + t];
      const double* brow = nb.value.data() + t * p;
      double* orow = n.value.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) orow[j] += av * brow[j];
    }
  }
  return last();
}

Var Tape::transpose(Var a) {
  check_owner(a, "transpose");
  const Node& na = nodes_[a.id()];
  Node& n = fresh(OpKind::kTranspose);
  n.shape = Shape{na.shape.cols, na.shape.rows};
  n.lhs = a.id();
  n.value.resize(na.value.size());
  for (std::size_t i = 0; i < na.shape.rows; ++i) {
    for (std::size_t j = 0; j < na.shape.cols; ++j) {
      n.value[j * na.shape.rows + i] = na.value[i * na.shape.cols + j];
    }
  }
  return last();
}

Var Tape::sum(Var a) {
  check_owner(a, "sum");
  const Node& na = nodes_[a.id()];
  double acc = 0.0;
  for (double v : na.value) acc += v;
  Node& n = fresh(OpKind::kSum);
  n.shape = Shape{1, 1};
  n.lhs = a.id();
  n.value = {acc};
  return last();
}

Var Tape::mean(Var a) {
  check_owner(a, "mean");
  const Node& na = nodes_[a.id()];
  if (na.value.empty()) throw ShapeError("mean: empty operand");
  double acc = 0.0;
  for (double v : na.value) acc += v;
  Node& n = fresh(OpKind::kMean);
  n.shape = Shape{1, 1};
  n.lhs = a.id();
  n.value = {acc / static_cast<double>(na.value.size())};
  return last();
}

Var Tape::unary(OpKind kind, Var a) {
  check_owner(a, op_name(kind));
  const Node& na = nodes_[a.id()];
  Node& n = fresh(kind);
  n.shape = na.shape;
  n.lhs = a.id();
  n.value.resize(na.value.size());
  n.partial.resize(na.value.size());
  for (std::size_t k = 0; k < na.value.size(); ++k) {
    const double x = na.value[k];
    switch (kind) {
      case OpKind::kTanh: {
        const double t = std::tanh(x);
        n.value[k] = t;
        n.partial[k] = 1.0 - t * t;
        break;
      }
      case OpKind::kSigmoid: {
        const double s = nsrlab::sigmoid(x);
        n.value[k] = s;
        n.partial[k] = s * (1.0 - s);
        break;
      }
      default: {
        n.value[k] = std::fabs(x);
        n.partial[k] = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        break;
      }
    }
  }
  return last();
}

Var Tape::tanh(Var a) { return unary(OpKind::kTanh, a); }
Var Tape::sigmoid(Var a) { return unary(OpKind::kSigmoid, a); }
Var Tape::abs(Var a) { return unary(OpKind::kAbs, a); }

Var Tape::softmax_rows(Var a) {
  check_owner(a, "softmax");
  const Node& na = nodes_[a.id()];
  if (na.shape.cols == 0) throw ShapeError("softmax: empty rows in shape " + to_string(na.shape));
  Node& n = fresh(OpKind::kSoftmaxRows);
  n.shape = na.shape;
  n.lhs = a.id();
  n.value = na.value;
  for (std::size_t r = 0; r < na.shape.rows; ++r) {
    softmax_inplace(std::span<double>(n.value.data() + r * na.shape.cols, na.shape.cols));
  }
  return last();
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no operands");
  Node& n = fresh(OpKind::kConcatCols);
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    check_owner(parts[p], "concat_cols");
    const Shape s = nodes_[parts[p].id()].shape;
    if (p == 0) rows = s.rows;
    if (s.rows != rows) shape_mismatch(OpKind::kConcatCols, nodes_[parts[0].id()].shape, s);
    cols += s.cols;
    n.parts.push_back(parts[p].id());
  }
  n.shape = Shape{rows, cols};
  n.value.resize(rows * cols);
  std::size_t offset = 0;
  for (std::size_t id : n.parts) {
    const Node& src = nodes_[id];
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < src.shape.cols; ++c) {
        n.value[r * cols + offset + c] = src.value[r * src.shape.cols + c];
      }
    }
    offset += src.shape.cols;
  }
  return last();
}

Var Tape::select_column(Var m, std::size_t col) {
  check_owner(m, "column");
  const Node& nm = nodes_[m.id()];
  if (col >= nm.shape.cols) {
    throw ShapeError("column: index " + std::to_string(col) + " out of range for shape " +
                     to_string(nm.shape));
  }
  Node& n = fresh(OpKind::kColumn);
  n.shape = Shape{nm.shape.rows, 1};
  n.lhs = m.id();
  n.index = col;
  n.value.resize(nm.shape.rows);
  for (std::size_t r = 0; r < nm.shape.rows; ++r) n.value[r] = nm.value[r * nm.shape.cols + col];
  return last();
}

std::vector<double>& Tape::adjoint_of(std::size_t id) {
  Node& n = nodes_[id];
  if (n.adjoint.empty()) n.adjoint.assign(n.value.size(), 0.0);
  return n.adjoint;
}

const std::vector<double>& Tape::adjoint(Var v) const {
  check_owner(v, "adjoint");
  return nodes_[v.id()].adjoint;
}

void Tape::backward(Var output) {
  check_owner(output, "backward");
  if (nodes_[output.id()].value.size() != 1) {
    throw ShapeError("backward: output must be scalar, got shape " +
                     to_string(nodes_[output.id()].shape));
  }
  for (std::size_t id = 0; id < count_; ++id) nodes_[id].adjoint.clear();
  adjoint_of(output.id())[0] = 1.0;

  for (std::size_t id = output.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.adjoint.empty()) continue;
    const std::vector<double>& g = n.adjoint;
    switch (n.kind) {
      case OpKind::kConstant:
        break;
      case OpKind::kParameter: {
        for (std::size_t k = 0; k < g.size(); ++k) n.param->grad[k] += g[k];
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub:
      case OpKind::kMul: {
        const Shape sa = nodes_[n.lhs].shape;
        const Shape sb = nodes_[n.rhs].shape;
        const Bcast ma = broadcast_mode(sa, n.shape);
        const Bcast mb = broadcast_mode(sb, n.shape);
        auto& ga = adjoint_of(n.lhs);
        auto& gb = adjoint_of(n.rhs);
        const auto& va = nodes_[n.lhs].value;
        const auto& vb = nodes_[n.rhs].value;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const std::size_t ia = source_index(ma, k, n.shape.cols);
          const std::size_t ib = source_index(mb, k, n.shape.cols);
          if (n.kind == OpKind::kAdd) {
            ga[ia] += g[k];
            gb[ib] += g[k];
          } else if (n.kind == OpKind::kSub) {
            ga[ia] += g[k];
            gb[ib] -= g[k];
          } else {
            ga[ia] += g[k] * vb[ib];
            gb[ib] += g[k] * va[ia];
          }
        }
        break;
      }
      case OpKind::kAffine: {
        auto& ga = adjoint_of(n.lhs);
        for (std::size_t k = 0; k < g.size(); ++k) ga[k] += n.aux * g[k];
        break;
      }
      case OpKind::kMatVec: {
        const Node& nm = nodes_[n.lhs];
        const Node& nv = nodes_[n.rhs];
        const std::size_t rows = nm.shape.rows;
        const std::size_t cols = nm.shape.cols;
        auto& gm = adjoint_of(n.lhs);
        auto& gv = adjoint_of(n.rhs);
        for (std::size_t i = 0; i < rows; ++i) {
          for (std::size_t j = 0; j < cols; ++j) {
            gm[i * cols + j] += g[i] * nv.value[j];
            gv[j] += g[i] * nm.value[i * cols + j];
          }
        }
        break;
      }
      case OpKind::kMatMul: {
        const Node& na = nodes_[n.lhs];
        const Node& nb = nodes_[n.rhs];
        const std::size_t m = na.shape.rows;
        const std::size_t k = na.shape.cols;
        const std::size_t p = nb.shape.cols;
        auto& ga = adjoint_of(n.lhs);
        auto& gb = adjoint_of(n.rhs);
        for (std::size_t i = 0; i < m; ++i) {
          const double* grow = g.data() + i * p;
          for (std::size_t t = 0; t < k; ++t) {
            const double* brow = nb.value.data() + t * p;
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += grow[j] * brow[j];
            ga[i * k + t] += acc;
            const double av = na.value[i * k + t];
            double* gbrow = gb.data() + t * p;
            for (std::size_t j = 0; j < p; ++j) gbrow[j] += av * grow[j];
          }
        }
        break;
      }
      case OpKind::kTranspose: {
        const Shape src = nodes_[n.lhs].shape;
        auto& ga = adjoint_of(n.lhs);
        for (std::size_t i = 0; i < src.rows; ++i) {
          for (std::size_t j = 0; j < src.cols; ++j) {
            ga[i * src.cols + j] += g[j * src.rows + i];
          }
        }
        break;
      }
      case OpKind::kSum: {
        auto& ga = adjoint_of(n.lhs);
        for (double& v : ga) v += g[0];
        break;
      }
      case OpKind::kMean: {
        auto& ga = adjoint_of(n.lhs);
        const double share = g[0] / static_cast<double>(ga.size());
        for (double& v : ga) v += share;
        break;
      }
      case OpKind::kTanh:
      case OpKind::kSigmoid:
      case OpKind::kAbs: {
        auto& ga = adjoint_of(n.lhs);
        for (std::size_t k = 0; k < g.size(); ++k) ga[k] += g[k] * n.partial[k];
        break;
      }
      case OpKind::kSoftmaxRows: {
        auto& ga = adjoint_of(n.lhs);
        const std::size_t cols = n.shape.cols;
        for (std::size_t r = 0; r < n.shape.rows; ++r) {
          const double* s = n.value.data() + r * cols;
          const double* gr = g.data() + r * cols;
          double dot = 0.0;
          for (std::size_t c = 0; c < cols; ++c) dot += gr[c] * s[c];
          for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += s[c] * (gr[c] - dot);
        }
        break;
      }
      case OpKind::kConcatCols: {
        std::size_t offset = 0;
        for (std::size_t part : n.parts) {
          const Shape s = nodes_[part].shape;
          auto& gp = adjoint_of(part);
          for (std::size_t r = 0; r < s.rows; ++r) {
            for (std::size_t c = 0; c < s.cols; ++c) {
              gp[r * s.cols + c] += g[r * n.shape.cols + offset + c];
            }
          }
          offset += s.cols;
        }
        break;
      }
      case OpKind::kColumn: {
        auto& ga = adjoint_of(n.lhs);
        const std::size_t cols = nodes_[n.lhs].shape.cols;
        for (std::size_t r = 0; r < n.shape.rows; ++r) ga[r * cols + n.index] += g[r];
        break;
      }
    }
  }
}

Var operator+(Var a, Var b) { return a.tape()->add(a, b); }
Var operator-(Var a, Var b) { return a.tape()->sub(a, b); }
Var operator*(Var a, Var b) { return a.tape()->mul(a, b); }
Var operator*(double s, Var a) { return a.tape()->affine(a, s, 0.0); }
Var operator+(Var a, double s) { return a.tape()->affine(a, 1.0, s); }
Var operator-(double s, Var a) { return a.tape()->affine(a, -1.0, s); }
Var tanh(Var a) { return a.tape()->tanh(a); }
Var sigmoid(Var a) { return a.tape()->sigmoid(a); }
Var abs(Var a) { return a.tape()->abs(a); }
Var sum(Var a) { return a.tape()->sum(a); }
Var mean(Var a) { return a.tape()->mean(a); }

}  // namespace nsrlab::ad
