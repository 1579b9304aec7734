#include "cohesive/environment.hpp"

#include <stdexcept>

namespace cohesive {

void RewriteIndex::add(RewriteRule rule) {
  by_head_[rule.lhs.head].push_back(std::move(rule));
  ++count_;
}

const std::vector<RewriteRule>& RewriteIndex::rules_for(const std::string& head) const {
  static const std::vector<RewriteRule> kNone;
  auto it = by_head_.find(head);
  return it == by_head_.end() ? kNone : it->second;
}

const ConstInfo* Environment::lookup(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : it->second.get();
}

void Environment::add_constant(ConstInfo info) {
  if (contains(info.name)) throw std::logic_error("duplicate constant " + info.name);
  order_.push_back(info.name);
  auto key = info.name;
  consts_.emplace(std::move(key), std::make_shared<const ConstInfo>(std::move(info)));
}

void Environment::add_rewrite(RewriteRule rule) {
  if (contains(rule.name)) throw std::logic_error("duplicate rule " + rule.name);
  rule_names_.emplace(rule.name, true);
  rewrites_.add(std::move(rule));
}

}  // namespace cohesive
