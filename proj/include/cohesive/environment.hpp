#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cohesive/syntax.hpp"

namespace cohesive {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

enum class ConstKind { Definition, Postulate };

/// A checked global constant. All constants are closed, hence crisp.
struct ConstInfo {
  std::string name;
  ConstKind kind = ConstKind::Postulate;
  TermPtr type;
  TermPtr body;  // definitions only
  // Closed values computed at admission; evaluation falls back to the terms.
  ValuePtr type_value;
  ValuePtr body_value;
};

/// Rules per head constant, in declaration order (first match wins).
class RewriteIndex {
 public:
  void add(RewriteRule rule);
  const std::vector<RewriteRule>& rules_for(const std::string& head) const;
  bool has_rules(const std::string& head) const { return by_head_.count(head) != 0; }
  std::size_t size() const { return count_; }

 private:
  std::map<std::string, std::vector<RewriteRule>> by_head_;
  std::size_t count_ = 0;
};

/// Global table of checked declarations. Adding never mutates shared state,
/// so copies are cheap snapshots that can be handed to other threads.
class Environment {
 public:
  bool contains(const std::string& name) const { return consts_.count(name) != 0 || rule_names_.count(name) != 0; }
  bool is_constant(const std::string& name) const { return consts_.count(name) != 0; }
  const ConstInfo* lookup(const std::string& name) const;

  void add_constant(ConstInfo info);
  void add_rewrite(RewriteRule rule);

  const RewriteIndex& rewrites() const { return rewrites_; }
  /// Constant names in declaration order.
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::map<std::string, std::shared_ptr<const ConstInfo>> consts_;
  std::map<std::string, bool> rule_names_;
  std::vector<std::string> order_;
  RewriteIndex rewrites_;
};

}  // namespace cohesive
