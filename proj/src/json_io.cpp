#include "shortlist/json_io.hpp"

#include <fstream>
#include <map>

namespace shortlist {

using nlohmann::json;

Election parse_election(const json& doc) {
  if (!doc.is_object() || !doc.contains("candidates") || !doc.contains("votes"))
    throw std::invalid_argument("an election file needs 'candidates' and 'votes'");
  Election election;
  std::map<std::string, CandidateId> index;
  for (const auto& name : doc.at("candidates")) {
    if (!name.is_string())
      throw std::invalid_argument("candidate names must be strings");
    const std::string s = name.get<std::string>();
    if (index.count(s)) throw std::invalid_argument("duplicate candidate name '" + s + "'");
    index[s] = election.num_candidates++;
    election.candidate_names.push_back(s);
  }
  if (election.num_candidates == 0)
    throw std::invalid_argument("an election needs at least one candidate");

  std::size_t vote_index = 0;
  for (const auto& vote : doc.at("votes")) {
    if (!vote.is_object() || !vote.contains("order"))
      throw std::invalid_argument("vote " + std::to_string(vote_index) + " needs an 'order'");
    WeightedBallot wb;
    wb.count = vote.value("count", 1);
    for (const auto& name : vote.at("order")) {
      const std::string s = name.get<std::string>();
      const auto it = index.find(s);
      if (it == index.end())
        throw std::invalid_argument("vote " + std::to_string(vote_index) +
                                    " names unknown candidate '" + s + "'");
      wb.ballot.order.push_back(it->second);
    }
    if (wb.ballot.order.size() != static_cast<std::size_t>(election.num_candidates))
      throw std::invalid_argument("vote " + std::to_string(vote_index) +
                                  " does not rank every candidate exactly once");
    election.ballots.push_back(std::move(wb));
    ++vote_index;
  }
  election.validate();
  return election;
}

json serialize_election(const Election& election) {
  json doc;
  doc["candidates"] = election.candidate_names;
  doc["votes"] = json::array();
  for (const auto& wb : election.ballots) {
    json vote;
    vote["order"] = json::array();
    for (CandidateId c : wb.ballot.order)
      vote["order"].push_back(election.candidate_names[c]);
    vote["count"] = wb.count;
    doc["votes"].push_back(std::move(vote));
  }
  return doc;
}

UtilityProfile parse_utilities(const json& doc, const Election& election) {
  if (!doc.is_object() || !doc.contains("manipulators"))
    throw std::invalid_argument("a utility file needs 'manipulators'");
  std::map<std::string, CandidateId> index;
  for (CandidateId c = 0; c < election.num_candidates; ++c)
    index[election.candidate_names[c]] = c;

  UtilityProfile profile;
  std::size_t row_index = 0;
  for (const auto& manip : doc.at("manipulators")) {
    if (!manip.is_object() || !manip.contains("utilities"))
      throw std::invalid_argument("manipulator " + std::to_string(row_index) +
                                  " needs a 'utilities' mapping");
    std::vector<Value> row(election.num_candidates, 0);
    std::vector<char> present(election.num_candidates, 0);
    for (const auto& [name, value] : manip.at("utilities").items()) {
      const auto it = index.find(name);
      if (it == index.end())
        throw std::invalid_argument("manipulator " + std::to_string(row_index) +
                                    " names unknown candidate '" + name + "'");
      if (!value.is_number_integer() || value.get<Value>() < 0)
        throw std::invalid_argument("manipulator " + std::to_string(row_index) +
                                    " gives a non-integer or negative utility");
      row[it->second] = value.get<Value>();
      present[it->second] = 1;
    }
    for (CandidateId c = 0; c < election.num_candidates; ++c)
      if (!present[c])
        throw std::invalid_argument("manipulator " + std::to_string(row_index) +
                                    " misses candidate '" + election.candidate_names[c] + "'");
    profile.rows.push_back(std::move(row));
    ++row_index;
  }
  profile.validate();
  return profile;
}

json serialize_utilities(const UtilityProfile& profile, const Election& election) {
  json doc;
  doc["manipulators"] = json::array();
  for (int i = 0; i < profile.num_manipulators(); ++i) {
    json manip;
    manip["id"] = "u" + std::to_string(i + 1);
    manip["utilities"] = json::object();
    for (CandidateId c = 0; c < election.num_candidates; ++c)
      manip["utilities"][election.candidate_names[c]] = profile.rows[i][c];
    doc["manipulators"].push_back(std::move(manip));
  }
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
  }
  return doc;
}

}  // namespace shortlist
