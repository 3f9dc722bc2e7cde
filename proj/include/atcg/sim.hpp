#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "atcg/net.hpp"
#include "atcg/petri.hpp"

namespace atcg::sim {

struct Undo {};
struct Reset {};
using Choice = std::variant<std::size_t, Undo, Reset>;

// Interactive token game over one immutable net. Replaying `history` from
// the initial marking always reproduces `current`.
class SimSession {
 public:
  explicit SimSession(std::shared_ptr<const petri::PrTNet> net);

  const petri::PrTNet& net() const { return *net_; }
  const petri::Marking& current() const { return current_; }
  const std::vector<petri::Firing>& history() const { return history_; }
  const std::vector<petri::Firing>& enabled() const { return enabled_; }

  // Throws Error("bad-choice") for an index past the enabled list.
  void fire(std::size_t choice);
  void undo();
  void reset();

  // `enterName(UID)`; silent transitions show their tau name.
  std::string label(const petri::Firing& f) const;

 private:
  void replay();

  std::shared_ptr<const petri::PrTNet> net_;
  petri::Marking current_;
  std::vector<petri::Firing> history_;
  std::vector<petri::Firing> enabled_;
};

SimSession sim_step(SimSession s, const Choice& choice);

}  // namespace atcg::sim
