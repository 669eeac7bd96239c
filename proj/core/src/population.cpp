#include "matchmarket/population.hpp"

#include <string>

#include "matchmarket/errors.hpp"

namespace matchmarket {

int PopulationState::couple_agent_count() const noexcept {
  int c = 0;
  for (const int p : partner) c += (p != kNoPartner);
  return c;
}

int PopulationState::married_agent_count() const noexcept {
  int c = 0;
  for (const auto m : married) c += (m != 0);
  return c;
}

std::vector<int> PopulationState::eligible_agents() const {
  std::vector<int> out;
  out.reserve(utilities.size());
  for (int k = 0; k < n(); ++k) {
    if (!is_married(k)) out.push_back(k);
  }
  return out;
}

void PopulationState::check_invariants(const AffinityMatrix& a) const {
  const int size = n();
  if (static_cast<int>(partner.size()) != size || static_cast<int>(married.size()) != size) {
    throw StateError("population state: field lengths disagree");
  }
  for (int k = 0; k < size; ++k) {
    const int p = partner[k];
    if (p == kNoPartner) {
      if (is_married(k)) throw StateError("agent " + std::to_string(k) + " married but single");
      if (utilities[k] != a.at(k, k)) {
        throw StateError("agent " + std::to_string(k) + " single with utility != A_kk");
      }
      continue;
    }
    if (p < 0 || p >= size || p == k) {
      throw StateError("agent " + std::to_string(k) + " has out-of-range partner");
    }
    if (partner[p] != k) {
      throw StateError("partner map not an involution at agent " + std::to_string(k));
    }
    if (is_married(k) != is_married(p)) {
      throw StateError("married flags disagree inside couple (" + std::to_string(k) + "," +
                       std::to_string(p) + ")");
    }
    if (utilities[k] != a.at(k, p)) {
      throw StateError("agent " + std::to_string(k) + " coupled with utility != A_kp");
    }
  }
}

PopulationState initial_state(const AffinityMatrix& a) {
  PopulationState s;
  const int n = a.n();
  s.utilities.resize(n);
  s.partner.assign(n, kNoPartner);
  s.married.assign(n, 0);
  s.step = 0;
  for (int k = 0; k < n; ++k) s.utilities[k] = a.at(k, k);
  return s;
}

}  // namespace matchmarket
