#include "nabla/types.hpp"

namespace nabla {

Ty Ty::base(std::string name) {
  Ty t;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Base;
  n->name = std::move(name);
  t.node_ = std::move(n);
  return t;
}

Ty Ty::arrow(Ty dom, Ty cod) {
  Ty t;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  t.node_ = std::move(n);
  return t;
}

Ty Ty::meta(int id) {
  Ty t;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meta;
  n->meta = id;
  t.node_ = std::move(n);
  return t;
}

Ty Ty::arrows(const std::vector<Ty>& args, Ty result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}

std::vector<Ty> Ty::arg_types() const {
  std::vector<Ty> out;
  const Ty* t = this;
  while (t->is_arrow()) {
    out.push_back(t->dom());
    t = &t->cod();
  }
  return out;
}

Ty Ty::result() const {
  Ty t = *this;
  while (t.is_arrow()) t = t.cod();
  return t;
}

int Ty::arity() const { return static_cast<int>(arg_types().size()); }

int Ty::order() const {
  if (!is_arrow()) return 0;
  return std::max(dom().order() + 1, cod().order());
}

bool Ty::contains_base(const std::string& n) const {
  switch (kind()) {
    case Kind::Base: return name() == n;
    case Kind::Arrow: return dom().contains_base(n) || cod().contains_base(n);
    case Kind::Meta: return false;
  }
  return false;
}

std::string Ty::str() const {
  switch (kind()) {
    case Kind::Base: return name();
    case Kind::Meta: return "?" + std::to_string(meta_id());
    case Kind::Arrow: {
      std::string d = dom().str();
      if (dom().is_arrow()) d = "(" + d + ")";
      return d + " -> " + cod().str();
    }
  }
  return "";
}

bool operator==(const Ty& a, const Ty& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Base: return a.name() == b.name();
    case Ty::Kind::Meta: return a.meta_id() == b.meta_id();
    case Ty::Kind::Arrow: return a.dom() == b.dom() && a.cod() == b.cod();
  }
  return false;
}

}  // namespace nabla
