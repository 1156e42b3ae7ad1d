#pragma once

// Reverse-mode differentiation over dense double arrays.
//
// A Tape records every operation of one forward pass in creation order, so
// node inputs always have smaller indices than the node itself. backward()
// walks the record once from the output down to index 0 and accumulates the
// adjoints of Parameter leaves into Parameter::grad.
//
// Binary elementwise ops accept operands of equal shape, a 1x1 scalar on
// either side, or a 1 x cols row vector broadcast over the rows of a matrix.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsrlab/matrix.hpp"

namespace nsrlab::ad {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A trainable array together with its gradient accumulator and Adam state.
struct Parameter {
  std::string name;
  Shape shape{};
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> adam_m;
  std::vector<double> adam_v;
  std::int64_t step_count = 0;

  Parameter() = default;
  Parameter(std::string name, Shape shape, double fill = 0.0);
  Parameter(std::string name, Shape shape, std::vector<double> values);

  std::size_t size() const { return value.size(); }
  double& operator()(std::size_t r, std::size_t c) { return value[r * shape.cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return value[r * shape.cols + c]; }

  void zero_grad();
  // Drops gradient and optimizer state, keeping the value.
  void reset_optimizer();
};

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid while the tape lives
// and has not been cleared.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  Shape shape() const;
  const std::vector<double>& value() const;
  // Value of a 1x1 node.
  double scalar() const;

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

enum class OpKind {
  kConstant,
  kParameter,
  kAdd,
  kSub,
  kMul,
  kAffine,
  kMatVec,
  kMatMul,
  kTranspose,
  kSum,
  kMean,
  kTanh,
  kSigmoid,
  kSoftmaxRows,
  kAbs,
  kConcatCols,
  kColumn,
};

const char* op_name(OpKind kind);

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(const Matrix& m);
  Var constant(Shape shape, std::vector<double> values);
  Var scalar(double v);
  Var column(std::span<const double> values);
  Var parameter(Parameter& p);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  // scale * a + shift, elementwise.
  Var affine(Var a, double scale, double shift);
  // (r x c) times a length-c vector, giving r x 1.
  Var matvec(Var m, Var v);
  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var sum(Var a);
  Var mean(Var a);
  Var tanh(Var a);
  Var sigmoid(Var a);
  // Softmax of every row independently (a 1-D slice per row).
  Var softmax_rows(Var a);
  Var abs(Var a);
  Var concat_cols(std::span<const Var> parts);
  Var select_column(Var m, std::size_t col);

  // Reverse sweep from a 1x1 output. Parameter leaves receive += adjoint.
  void backward(Var output);

  // Adjoint of any node after backward(); empty if the node did not
  // influence the output.
  const std::vector<double>& adjoint(Var v) const;

  std::size_t size() const { return count_; }
  Shape shape(Var v) const { return nodes_[v.id()].shape; }
  const std::vector<double>& value(Var v) const { return nodes_[v.id()].value; }
  OpKind kind(Var v) const { return nodes_[v.id()].kind; }

  // Node storage is kept so later recordings reuse its buffers.
  void clear() { count_ = 0; }

 private:
  struct Node {
    OpKind kind = OpKind::kConstant;
    Shape shape{};
    std::vector<double> value;
    // Elementwise local derivative for unary ops (tanh, sigmoid, abs).
    std::vector<double> partial;
    std::vector<double> adjoint;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    std::vector<std::size_t> parts;
    double aux = 0.0;
    std::size_t index = 0;
    Parameter* param = nullptr;
  };

  Node& fresh(OpKind kind);
  Var last();
  void check_owner(Var v, const char* op) const;
  Var binary(OpKind kind, Var a, Var b);
  Var unary(OpKind kind, Var a);
  std::vector<double>& adjoint_of(std::size_t id);

  // deque: growing keeps references to earlier nodes valid.
  std::deque<Node> nodes_;
  std::size_t count_ = 0;
};

// Operator sugar; both operands must live on the same tape.
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator*(double s, Var a);
Var operator+(Var a, double s);
Var operator-(double s, Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var abs(Var a);
Var sum(Var a);
Var mean(Var a);

}  // namespace nsrlab::ad
