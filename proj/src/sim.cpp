#include "atcg/sim.hpp"

#include "atcg/error.hpp"
#include "atcg/testgen.hpp"

namespace atcg::sim {

SimSession::SimSession(std::shared_ptr<const petri::PrTNet> net) : net_(std::move(net)) {
  reset();
}

void SimSession::fire(std::size_t choice) {
  if (choice >= enabled_.size()) {
    throw Error("bad-choice", "choice " + std::to_string(choice) + " out of range (" +
                                  std::to_string(enabled_.size()) + " enabled)");
  }
  petri::Firing f = enabled_[choice];
  current_ = petri::fire(*net_, current_, f);
  history_.push_back(std::move(f));
  enabled_ = petri::enabled(*net_, current_);
}

void SimSession::undo() {
  if (history_.empty()) return;
  history_.pop_back();
  replay();
}

void SimSession::reset() {
  history_.clear();
  replay();
}

void SimSession::replay() {
  current_ = petri::initial_marking(*net_);
  for (const auto& f : history_) current_ = petri::fire(*net_, current_, f);
  enabled_ = petri::enabled(*net_, current_);
}

std::string SimSession::label(const petri::Firing& f) const {
  return testgen::format_call(testgen::record_firing(*net_, f));
}

SimSession sim_step(SimSession s, const Choice& choice) {
  if (const auto* i = std::get_if<std::size_t>(&choice)) {
    s.fire(*i);
  } else if (std::holds_alternative<Undo>(choice)) {
    s.undo();
  } else {
    s.reset();
  }
  return s;
}

}  // namespace atcg::sim
