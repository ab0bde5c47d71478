#include "calibra/report.hpp"

#include <cmath>
#include <sstream>

#include "calibra/serialize.hpp"

namespace calibra {

using nlohmann::json;

nlohmann::json report_json(const AuditReport& rep) {
  json cs = json::array();
  for (const auto& c : rep.constraints)
    cs.push_back({{"group", c.group_id},
                  {"type", c.type},
                  {"threshold", c.threshold},
                  {"bin", c.bin},
                  {"cell", c.cell},
                  {"gap", fmt12(c.gap)},
                  {"group_mass", fmt12(c.group_mass)},
                  {"constraint_mass", fmt12(c.constraint_mass)}});
  return {{"schema", "calibra/audit_report/v1"},
          {"metric", rep.metric},
          {"max_gap", fmt12(rep.max_gap)},
          {"witness", rep.witness},
          {"constraints", cs}};
}

std::string report_csv(const AuditReport& rep) {
  std::ostringstream out;
  out << "group,type,threshold,bin,cell,gap,group_mass,constraint_mass\n";
  for (const auto& c : rep.constraints)
    out << c.group_id << ',' << c.type << ',' << c.threshold << ',' << c.bin << ',' << c.cell
        << ',' << fmt12(c.gap) << ',' << fmt12(c.group_mass) << ',' << fmt12(c.constraint_mass)
        << "\n";
  return out.str();
}

nlohmann::json report_json(const ConflictReport& rep) {
  json j = {{"schema", "calibra/conflict_report/v1"},
            {"experiment", rep.experiment},
            {"theorem_bound", fmt12(rep.theorem_bound)},
            {"tolerance", fmt12(rep.tolerance)},
            {"vacuous", rep.vacuous},
            {"pass", rep.pass}};
  if (rep.experiment == "decision_conflict") {
    j["config"] = {{"n", rep.dconfig.n},
                   {"lambda", fmt12(rep.dconfig.lambda)},
                   {"alpha", fmt12(rep.dconfig.alpha)},
                   {"M", fmt12(rep.dconfig.M)},
                   {"kappa_eff", fmt12(rep.dconfig.kappa_eff)},
                   {"n_groups", rep.dconfig.n_groups},
                   {"group_fraction", fmt12(rep.dconfig.group_fraction)},
                   {"n_keys", rep.dconfig.n_keys},
                   {"seed", rep.dconfig.seed},
                   {"run_key_aware", rep.dconfig.run_key_aware}};
    json ts = json::array();
    for (const auto& t : rep.dtrials)
      ts.push_back({{"trial_seed", t.trial_seed},
                    {"gamma_nu", fmt12(t.gamma_nu)},
                    {"realized_gamma", fmt12(t.realized_gamma)},
                    {"mc_cw", fmt12(t.mc_cw)},
                    {"mad", fmt12(t.mad)},
                    {"learner_converged", t.learner_converged},
                    {"key_aware_excess", fmt12(t.key_aware_excess)},
                    {"key_aware_ok", t.key_aware_ok},
                    {"blend_dev", fmt12(t.blend_dev)},
                    {"blend_bound", fmt12(t.blend_bound)},
                    {"pass", t.pass}});
    j["trials"] = ts;
  } else {
    j["eps_ac"] = fmt12(rep.eps_ac);
    json ts = json::array();
    for (const auto& t : rep.ltrials)
      ts.push_back({{"trial_seed", t.trial_seed},
                    {"realized_gamma", fmt12(t.realized_gamma)},
                    {"hstar_accept_mass", fmt12(t.hstar_accept_mass)},
                    {"l1_minus_l0", fmt12(t.l1_minus_l0)},
                    {"battery_size", t.battery_size},
                    {"mac_accurate_count", t.mac_accurate_count},
                    {"min_pass_gap", fmt12(t.min_pass_gap)},
                    {"key_aware_mac", fmt12(t.key_aware_mac)},
                    {"key_aware_loss_gap", fmt12(t.key_aware_loss_gap)},
                    {"learner_converged", t.learner_converged},
                    {"pass", t.pass}});
    j["trials"] = ts;
  }
  return j;
}

std::string report_csv(const ConflictReport& rep) {
  std::ostringstream out;
  if (rep.experiment == "decision_conflict") {
    out << "trial_seed,gamma_nu,realized_gamma,mc_cw,mad,key_aware_excess,blend_dev,pass\n";
    for (const auto& t : rep.dtrials)
      out << t.trial_seed << ',' << fmt12(t.gamma_nu) << ',' << fmt12(t.realized_gamma) << ','
          << fmt12(t.mc_cw) << ',' << fmt12(t.mad) << ',' << fmt12(t.key_aware_excess) << ','
          << fmt12(t.blend_dev) << ',' << (t.pass && t.key_aware_ok ? 1 : 0) << "\n";
  } else {
    out << "trial_seed,realized_gamma,hstar_accept_mass,l1_minus_l0,mac_accurate_count,"
           "min_pass_gap,key_aware_mac,key_aware_loss_gap,pass\n";
    for (const auto& t : rep.ltrials)
      out << t.trial_seed << ',' << fmt12(t.realized_gamma) << ',' << fmt12(t.hstar_accept_mass)
          << ',' << fmt12(t.l1_minus_l0) << ',' << t.mac_accurate_count << ','
          << fmt12(t.min_pass_gap) << ',' << fmt12(t.key_aware_mac) << ','
          << fmt12(t.key_aware_loss_gap) << ',' << (t.pass ? 1 : 0) << "\n";
  }
  return out.str();
}

nlohmann::json report_json(const FractionPreservationReport& rep) {
  json adv = json::array();
  for (double a : rep.max_advantage) adv.push_back(fmt12(a));
  return {{"schema", "calibra/fraction_report/v1"},
          {"config",
           {{"n", rep.config.n},
            {"gamma", fmt12(rep.config.gamma)},
            {"probe_fraction", fmt12(rep.config.probe_fraction)},
            {"n_probes", rep.config.n_probes},
            {"n_keys", rep.config.n_keys},
            {"advantage_bound", fmt12(rep.config.advantage_bound)},
            {"seed", rep.config.seed}}},
          {"max_advantage", adv},
          {"pass", rep.pass}};
}

std::string report_csv(const FractionPreservationReport& rep) {
  std::ostringstream out;
  out << "trial,max_advantage\n";
  for (size_t i = 0; i < rep.max_advantage.size(); ++i)
    out << i << ',' << fmt12(rep.max_advantage[i]) << "\n";
  return out.str();
}

nlohmann::json rule_json(const DecisionRule& rule) {
  json j = {{"schema", "calibra/rule/v1"}, {"k", rule.k}};
  switch (rule.kind) {
    case DecisionRule::Kind::Ita: {
      j["kind"] = "ita";
      json g = json::array();
      for (double v : rule.g) g.push_back(dec(v));
      j["g"] = g;
      break;
    }
    case DecisionRule::Kind::Threshold:
      j["kind"] = "threshold";
      j["tau"] = rule.tau;
      break;
    case DecisionRule::Kind::LossMin:
      j["kind"] = "loss_min";
      j["loss"] = to_json(*rule.loss);
      break;
    case DecisionRule::Kind::Custom: {
      j["kind"] = "custom";
      // custom rules serialize as a table over the m=10 grid; values between
      // grid points are not defined by this file (interpolation disclaimer)
      j["disclaimer"] = "table over the m=10 simplex grid; off-grid values undefined";
      json tbl = json::array();
      for (const auto& y : simplex_grid(rule.k, 10))
        tbl.push_back({{"y", [&] {
                          json a = json::array();
                          for (double v : y.p) a.push_back(dec(v));
                          return a;
                        }()},
                       {"accept", dec(rule.accept(y))}});
      j["table"] = tbl;
      break;
    }
  }
  return j;
}

nlohmann::json certificate_json(const AffinenessCertificate& cert) {
  auto vecj = [](const StochasticVector& y) {
    json a = json::array();
    for (double v : y.p) a.push_back(dec(v));
    return a;
  };
  return {{"schema", "calibra/affineness_certificate/v1"},
          {"epsilon", fmt12(cert.epsilon)},
          {"gamma", fmt12(cert.gamma)},
          {"grid_m", cert.grid_m},
          {"y", vecj(cert.y)},
          {"y2", vecj(cert.y2)}};
}

nlohmann::json lipschitz_json(const LipschitzEstimate& est) {
  json j = {{"schema", "calibra/lipschitz/v1"}, {"finite", est.finite}};
  j["bound"] = est.finite ? fmt12(est.bound) : "no finite certificate";
  return j;
}

std::string trace_jsonl(const LearnTrace& trace) {
  std::ostringstream out;
  for (const auto& r : trace.records) {
    json j = {{"iter", r.iter},     {"group", r.group}, {"type", r.type},
              {"threshold", r.threshold}, {"bin", r.bin},     {"cell", r.cell},
              {"gap", fmt12(r.gap)},      {"eta", fmt12(r.eta)}};
    out << j.dump() << "\n";
  }
  json tail = {{"iterations", trace.iterations},
               {"converged", trace.converged},
               {"final_gap", fmt12(trace.final_gap)}};
  out << tail.dump() << "\n";
  return out.str();
}

std::string trace_plotdata(const LearnTrace& trace) {
  std::ostringstream out;
  out << "iteration,abs_gap\n";
  for (const auto& r : trace.records)
    out << r.iter << ',' << fmt12(std::abs(r.gap)) << "\n";
  return out.str();
}

std::string canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

AuditReport audit_report_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "calibra/audit_report/v1")
    throw std::invalid_argument("expected audit report schema");
  AuditReport rep;
  rep.metric = j.at("metric").get<std::string>();
  for (const auto& c : j.at("constraints")) {
    ConstraintGap g;
    g.group_id = c.at("group").get<std::string>();
    g.type = c.at("type").get<int>();
    g.threshold = c.at("threshold").get<int>();
    g.bin = c.at("bin").get<int>();
    g.cell = c.at("cell").get<std::string>();
    g.gap = parse_dec(c.at("gap").get<std::string>());
    g.group_mass = parse_dec(c.at("group_mass").get<std::string>());
    g.constraint_mass = parse_dec(c.at("constraint_mass").get<std::string>());
    rep.constraints.push_back(std::move(g));
  }
  rep.finalize();
  return rep;
}

nlohmann::json conflict_roundtrip_check(const nlohmann::json& j) {
  // parse into plain values and re-emit; the caller compares bytes
  return json::parse(j.dump());
}

}  // namespace calibra
