#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fixtures {

using namespace cfsmkit;

std::string data_path(const std::string& name) { return std::string(CFSMKIT_TEST_DATA) + "/" + name; }

std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing test data " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cfsm m_j() {
  return Cfsm(Role{"J"}, {"1", "2"}, "1",
              {{"1", send("J", "M", "text"), "2"},
               {"2", receive("M", "J", "ok"), "1"},
               {"2", receive("M", "J", "fail"), "1"}});
}

Cfsm m_k() {
  return Cfsm(Role{"K"}, {"1", "2", "3", "4"}, "1",
              {{"1", receive("A", "K", "text"), "2"},
               {"2", send("K", "A", "ok"), "3"},
               {"2", send("K", "A", "fail"), "1"},
               {"3", receive("B", "K", "text"), "4"},
               {"4", send("K", "B", "ok"), "1"},
               {"4", send("K", "B", "fail"), "3"}});
}

Cfsm drawn_gateway_j() {
  return Cfsm(Role{"J"}, {"q1", "h1", "q2", "h2a", "h2b"}, "q1",
              {{"q1", receive("K", "J", "text"), "h1"},
               {"h1", send("J", "M", "text"), "q2"},
               {"q2", receive("M", "J", "ok"), "h2a"},
               {"h2a", send("J", "K", "ok"), "q1"},
               {"q2", receive("M", "J", "fail"), "h2b"},
               {"h2b", send("J", "K", "fail"), "q1"}});
}

Cfsm drawn_gateway_k() {
  return Cfsm(Role{"K"}, {"q1", "h1", "q2", "h2a", "h2b", "q3", "h3", "q4", "h4a", "h4b"}, "q1",
              {{"q1", receive("A", "K", "text"), "h1"},
               {"h1", send("K", "J", "text"), "q2"},
               {"q2", receive("J", "K", "ok"), "h2a"},
               {"h2a", send("K", "A", "ok"), "q3"},
               {"q2", receive("J", "K", "fail"), "h2b"},
               {"h2b", send("K", "A", "fail"), "q1"},
               {"q3", receive("B", "K", "text"), "h3"},
               {"h3", send("K", "J", "text"), "q4"},
               {"q4", receive("J", "K", "ok"), "h4a"},
               {"h4a", send("K", "B", "ok"), "q1"},
               {"q4", receive("J", "K", "fail"), "h4b"},
               {"h4b", send("K", "B", "fail"), "q3"}});
}

GlobalType fig1() { return parse_global_type(read_data("fig1.gt")); }
GlobalType s_prime() { return parse_global_type(read_data("s_prime.gt")); }

}  // namespace fixtures
