#pragma once

#include <memory>
#include <string>
#include <vector>

namespace nabla {

/// Simple types: base types (including the built-in `o` and `prop`) and arrows.
/// Meta types only exist transiently during type inference.
class Ty {
 public:
  enum class Kind { Base, Arrow, Meta };

  Ty() = default;
  static Ty base(std::string name);
  static Ty arrow(Ty dom, Ty cod);
  static Ty meta(int id);
  /// `args[0] -> args[1] -> ... -> result`
  static Ty arrows(const std::vector<Ty>& args, Ty result);

  static Ty prop() { return base("prop"); }
  static Ty o() { return base("o"); }

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_meta() const { return kind() == Kind::Meta; }
  const std::string& name() const;
  int meta_id() const;
  const Ty& dom() const;
  const Ty& cod() const;

  /// Argument types of a curried arrow, outermost first.
  std::vector<Ty> arg_types() const;
  /// Result type after stripping all arrows.
  Ty result() const;
  int arity() const;
  /// Order: base types have order 0, `a -> b` has order max(order(a)+1, order(b)).
  int order() const;
  bool contains_base(const std::string& name) const;

  std::string str() const;

  friend bool operator==(const Ty& a, const Ty& b);
  friend bool operator!=(const Ty& a, const Ty& b) { return !(a == b); }
  friend bool operator<(const Ty& a, const Ty& b) { return a.str() < b.str(); }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct Ty::Node {
  Kind kind;
  std::string name;
  int meta = 0;
  Ty dom, cod;
};

inline Ty::Kind Ty::kind() const { return node_->kind; }
inline const std::string& Ty::name() const { return node_->name; }
inline int Ty::meta_id() const { return node_->meta; }
inline const Ty& Ty::dom() const { return node_->dom; }
inline const Ty& Ty::cod() const { return node_->cod; }

}  // namespace nabla
