#ifndef LEXMATCH_TESTS_FIXTURES_HPP_
#define LEXMATCH_TESTS_FIXTURES_HPP_

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "lexmatch/instance.hpp"
#include "lexmatch/matching.hpp"

namespace fx {

inline std::string path(const std::string& name) {
  return std::string(LEXMATCH_FIXTURE_DIR) + "/" + name;
}

inline std::string read(const std::string& name) {
  std::ifstream in(path(name), std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline lexmatch::Instance load(const std::string& name) {
  return lexmatch::parse_instance(read(name));
}

inline lexmatch::Instance ex1() { return load("ex1.json"); }
inline lexmatch::Instance ex2() { return load("ex2.json"); }
inline lexmatch::Instance ex3() { return load("ex3.json"); }

inline lexmatch::TaskSet ts(const lexmatch::Instance& inst,
                            std::initializer_list<const char*> names) {
  std::vector<lexmatch::TaskId> tasks;
  for (const char* n : names) tasks.push_back(inst.task(n));
  return lexmatch::TaskSet(std::move(tasks));
}

inline std::vector<lexmatch::TaskId> seq(const lexmatch::Instance& inst,
                                         std::initializer_list<const char*> names) {
  std::vector<lexmatch::TaskId> tasks;
  for (const char* n : names) tasks.push_back(inst.task(n));
  return tasks;
}

// Matching for a two-agent instance from the sets of a1 and a2.
inline lexmatch::Matching pair(const lexmatch::Instance& inst,
                               std::initializer_list<const char*> a1,
                               std::initializer_list<const char*> a2) {
  return lexmatch::Matching::from_allocations(inst, {ts(inst, a1), ts(inst, a2)});
}

}  // namespace fx

#endif  // LEXMATCH_TESTS_FIXTURES_HPP_
