#pragma once

#include <json.hpp>

#include "plq/breakability.hpp"
#include "plq/four_site.hpp"
#include "plq/levin_wen.hpp"

namespace plq {

using Json = nlohmann::ordered_json;

Json local_operator_to_json(const LocalOperator& op);
LocalOperator local_operator_from_json(const Json& j);

Json model_to_json(const LatticeModel& model);
LatticeModel model_from_json(const Json& j);

Json mpo_to_json(const MPO& mpo);
MPO mpo_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j);

Json ftable_to_json(const FSymbolTable& t);
FSymbolTable ftable_from_json(const Json& j);

RegionSpec region_from_json(const LatticeModel& model, const Json& j);

Json verification_report_to_json(const VerificationReport& rep);
Json validation_report_to_json(const ValidationReport& rep);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace plq
