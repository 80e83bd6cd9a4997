#ifndef NCERG_REPORT_HPP_
#define NCERG_REPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncerg/algebra.hpp"

namespace ncerg {

// Secondary bound carried by a report (e.g. the sup-norm half of a weak-type
// certificate). Holds iff achieved <= claimed_bound + tolerance.
struct ReportCondition {
  std::string name;
  double claimed_bound;
  double achieved;
  double tolerance;
  bool holds() const { return achieved <= claimed_bound + tolerance; }
};

// Outcome of an inequality or certificate check. pass is derived, never
// set directly: achieved <= claimed_bound + tolerance, and every attached
// condition holds as well.
class CertificateReport {
 public:
  CertificateReport(std::string claim, double claimed_bound, double achieved,
                    double tolerance)
      : claim_(std::move(claim)),
        claimed_bound_(claimed_bound),
        achieved_(achieved),
        tolerance_(tolerance) {}

  const std::string& claim() const { return claim_; }
  double claimed_bound() const { return claimed_bound_; }
  double achieved() const { return achieved_; }
  double tolerance() const { return tolerance_; }
  bool primary_holds() const { return achieved_ <= claimed_bound_ + tolerance_; }
  bool pass() const {
    if (!primary_holds()) return false;
    for (const auto& c : conditions_)
      if (!c.holds()) return false;
    return true;
  }

  // Slack left under the bound; negative when the check fails.
  double margin() const { return claimed_bound_ + tolerance_ - achieved_; }

  const std::optional<Projection>& witness() const { return witness_; }
  const std::map<std::string, double>& metadata() const { return metadata_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<ReportCondition>& conditions() const { return conditions_; }

  CertificateReport& add_condition(std::string name, double claimed, double achieved,
                                   double tolerance) {
    conditions_.push_back({std::move(name), claimed, achieved, tolerance});
    return *this;
  }
  const ReportCondition* condition(const std::string& name) const {
    for (const auto& c : conditions_)
      if (c.name == name) return &c;
    return nullptr;
  }

  CertificateReport& set_witness(Projection e) {
    witness_ = std::move(e);
    return *this;
  }
  CertificateReport& set(const std::string& key, double value) {
    metadata_[key] = value;
    return *this;
  }
  CertificateReport& note(std::string text) {
    notes_.push_back(std::move(text));
    return *this;
  }

  double get(const std::string& key, double fallback = 0.0) const {
    auto it = metadata_.find(key);
    return it == metadata_.end() ? fallback : it->second;
  }

 private:
  std::string claim_;
  double claimed_bound_;
  double achieved_;
  double tolerance_;
  std::optional<Projection> witness_;
  std::map<std::string, double> metadata_;
  std::vector<std::string> notes_;
  std::vector<ReportCondition> conditions_;
};

}  // namespace ncerg

#endif  // NCERG_REPORT_HPP_
