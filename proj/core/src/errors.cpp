#include "eov/errors.hpp"

#include <sstream>

namespace eov {

const char* stage_name(Stage stage) {
    switch (stage) {
    case Stage::Execute: return "execute";
    case Stage::Order: return "order";
    case Stage::Validate: return "validate";
    }
    return "unknown";
}

namespace {

std::string unstable_message(double utilization, std::optional<Stage> stage) {
    std::ostringstream os;
    os << "queue unstable: utilization " << utilization;
    if (stage)
        os << " in " << stage_name(*stage) << " phase";
    return os.str();
}

} // namespace

UnstableQueue::UnstableQueue(double utilization, std::optional<Stage> stage)
    : Error(unstable_message(utilization, stage)),
      utilization_(utilization),
      stage_(stage) {}

ParseError::ParseError(const std::string& origin, int line,
                       const std::string& what)
    : Error(origin + ":" + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(const std::string& field,
                                 const std::string& what)
    : Error(field + ": " + what), field_(field) {}

} // namespace eov
