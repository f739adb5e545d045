#include "eov/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

namespace eov {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

struct RawField {
    std::string value;
    int line = 0;
    bool used = false;
};

// One accepted spelling of a field, with the factor that converts its unit
// into the canonical one.
struct Spelling {
    const char* key;
    double factor;
};

class FieldReader {
public:
    FieldReader(std::istream& in, std::string origin) : origin_(std::move(origin)) {
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const std::string text = trim(line);
            if (text.empty())
                continue;
            const auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ParseError(origin_, number, "expected 'key = value'");
            const std::string key = trim(text.substr(0, eq));
            const std::string value = trim(text.substr(eq + 1));
            if (key.empty())
                throw ParseError(origin_, number, "empty key");
            if (value.empty())
                throw ParseError(origin_, number, "empty value for '" + key + "'");
            if (fields_.count(key))
                throw ParseError(origin_, number, "duplicate key '" + key + "'");
            fields_[key] = RawField{value, number};
        }
    }

    std::optional<std::string> take_string(const std::string& key) {
        auto it = fields_.find(key);
        if (it == fields_.end())
            return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> take_scaled(std::initializer_list<Spelling> spellings) {
        std::optional<double> out;
        for (const auto& s : spellings) {
            auto it = fields_.find(s.key);
            if (it == fields_.end())
                continue;
            if (out)
                throw ParseError(origin_, it->second.line,
                                 std::string("field '") + s.key +
                                     "' repeats an already-given value in "
                                     "another unit");
            it->second.used = true;
            out = parse_number(it->second) * s.factor;
        }
        return out;
    }

    double require_scaled(std::initializer_list<Spelling> spellings,
                          bool preset_covers, double preset_value) {
        if (auto v = take_scaled(spellings))
            return *v;
        if (preset_covers)
            return preset_value;
        throw ValidationError(spellings.begin()->key, "missing required field");
    }

    double require_scaled(std::initializer_list<Spelling> spellings) {
        if (auto v = take_scaled(spellings))
            return *v;
        throw ValidationError(spellings.begin()->key, "missing required field");
    }

    int require_int(const std::string& key) {
        if (auto v = take_int(key))
            return *v;
        throw ValidationError(key, "missing required field");
    }

    std::optional<int> take_int(const std::string& key) {
        auto it = fields_.find(key);
        if (it == fields_.end())
            return std::nullopt;
        it->second.used = true;
        const double v = parse_number(it->second);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ParseError(origin_, it->second.line,
                             "'" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    std::optional<bool> take_bool(const std::string& key) {
        auto raw = take_string(key);
        if (!raw)
            return std::nullopt;
        if (*raw == "true")
            return true;
        if (*raw == "false")
            return false;
        throw ParseError(origin_, fields_.at(key).line,
                         "'" + key + "' must be true or false");
    }

    int line_of(const std::string& key) const {
        auto it = fields_.find(key);
        return it == fields_.end() ? 0 : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, field] : fields_)
            if (!field.used)
                throw ParseError(origin_, field.line, "unknown field '" + key + "'");
    }

    const std::string& origin() const { return origin_; }

private:
    double parse_number(const RawField& field) {
        const char* begin = field.value.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + field.value.size() || !std::isfinite(v))
            throw ParseError(origin_, field.line,
                             "'" + field.value + "' is not a finite number");
        return v;
    }

    std::string origin_;
    std::map<std::string, RawField> fields_;
};

void validate_link(const std::string& field, const LinkParams& link) {
    if (!std::isfinite(link.overhead_s) || link.overhead_s < 0.0)
        throw ValidationError(field, "overhead must be >= 0");
    if (!std::isfinite(link.bandwidth_bps) || link.bandwidth_bps <= 0.0)
        throw ValidationError(field, "bandwidth must be > 0");
}

void validate_scenario(const ScenarioConfig& sc) {
    if (sc.workload.clients < 1)
        throw ValidationError("workload.clients", "must be >= 1");
    if (sc.workload.per_client_rate <= 0.0)
        throw ValidationError("workload.rate_per_client_tps", "must be > 0");
    if (sc.workload.tx_bits <= 0.0)
        throw ValidationError("workload.tx_size_kb", "must be > 0");
    if (sc.execute.cores < 1)
        throw ValidationError("execute.cores", "must be >= 1");
    if (sc.execute.core_service_rate <= 0.0)
        throw ValidationError("execute.mu_core_tps", "must be > 0");
    if (sc.order.osn_count < 1 || sc.order.osn_count % 2 == 0)
        throw ValidationError("order.osns", "k must be odd");
    if (sc.order.sequencing_rate <= 0.0)
        throw ValidationError("order.mu_order_tps", "must be > 0");
    if (sc.order.batch_timeout_s <= 0.0)
        throw ValidationError("order.batch_timeout_s", "must be > 0");
    if (sc.order.batch_size < 1)
        throw ValidationError("order.batch_size", "must be >= 1");
    if (sc.order.var.cv_arrival < 0.0 || sc.order.var.cv_service < 0.0)
        throw ValidationError("order.cv_arrival", "must be >= 0");
    if (sc.validate.disk.iops <= 0.0)
        throw ValidationError("validate.iops", "must be > 0");
    if (sc.validate.disk.seek_s < 0.0)
        throw ValidationError("validate.seek_ms", "must be >= 0");
    if (sc.validate.disk.kind == DiskParams::Kind::SSD &&
        sc.validate.disk.seek_s != 0.0)
        throw ValidationError("validate.seek_ms", "must be 0 for an SSD");
    if (sc.validate.var.cv_arrival < 0.0 || sc.validate.var.cv_service < 0.0)
        throw ValidationError("validate.cv_arrival", "must be >= 0");
    if (sc.io_bytes_override && *sc.io_bytes_override <= 0.0)
        throw ValidationError("validate.io_size_kb", "must be > 0");
    validate_link("execute", sc.execute.link);
    if (sc.execute.reply_link)
        validate_link("execute.reply", *sc.execute.reply_link);
    validate_link("order.c2l", sc.order.link_client_to_leader);
    validate_link("order.l2f", sc.order.link_leader_to_followers);
    validate_link("validate", sc.validate.link);
    if (sc.sweep) {
        if (sc.sweep->values.empty())
            throw ValidationError("sweep.values", "must list at least one value");
        for (double v : sc.sweep->values) {
            if (!std::isfinite(v) || v <= 0.0)
                throw ValidationError("sweep.values", "values must be > 0");
            using P = SweepSpec::Parameter;
            const auto p = sc.sweep->parameter;
            if ((p == P::Cores || p == P::Osns || p == P::BatchSize) &&
                v != std::floor(v))
                throw ValidationError("sweep.values", "values must be integers");
            if (p == P::Osns && static_cast<long long>(v) % 2 == 0)
                throw ValidationError("sweep.values", "k must be odd");
        }
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

const char* sweep_parameter_name(SweepSpec::Parameter p) {
    switch (p) {
    case SweepSpec::Parameter::Cores: return "cores";
    case SweepSpec::Parameter::Osns: return "osns";
    case SweepSpec::Parameter::Lambda: return "lambda";
    case SweepSpec::Parameter::BatchSize: return "batch_size";
    }
    return "unknown";
}

void ScenarioConfig::refresh_derived() {
    execute.tx_bits = workload.tx_bits;
    order.tx_bits = workload.tx_bits;
    validate.tx_bits = workload.tx_bits;
    execute.link.fanout = 1;
    if (execute.reply_link)
        execute.reply_link->fanout = 1;
    order.link_client_to_leader.fanout = 1;
    order.link_leader_to_followers.fanout = std::max(1, order.osn_count - 1);
    validate.link.fanout = 1;
    // One disk IO per block unless a size was forced.
    validate.disk.io_bytes = io_bytes_override
                                 ? *io_bytes_override
                                 : order.batch_size * workload.tx_bits / 8.0;
}

ScenarioConfig preset_scenario(const std::string& name) {
    ScenarioConfig sc;
    sc.preset = name;
    sc.workload.tx_bits = 3.0 * kBitsPerKb;

    double bandwidth = 0.0;
    if (name == "local-1gbps") {
        bandwidth = 1e9;
        sc.validate.disk.kind = DiskParams::Kind::HDD;
        sc.validate.disk.iops = 125.0;
        sc.validate.disk.seek_s = 0.008;
    } else if (name == "cloud-10gbps") {
        bandwidth = 1e10;
        sc.validate.disk.kind = DiskParams::Kind::SSD;
        sc.validate.disk.iops = 200.0;
        sc.validate.disk.seek_s = 0.0;
    } else {
        throw ValidationError("preset", "unknown preset '" + name + "'");
    }

    const LinkParams link{0.010, bandwidth, 1, false};
    sc.execute.link = link;
    sc.order.link_client_to_leader = link;
    sc.order.link_leader_to_followers = link;
    sc.validate.link = link;
    sc.refresh_derived();
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin) {
    FieldReader r(in, origin);

    ScenarioConfig sc;
    bool preset = false;
    if (auto tag = r.take_string("preset")) {
        sc = preset_scenario(*tag);
        preset = true;
    }

    constexpr double ms = 1e-3;
    constexpr double mbps = kBitsPerSecPerMbps;
    constexpr double kb = kBitsPerKb;

    sc.workload.clients = r.require_int("workload.clients");
    sc.workload.per_client_rate =
        r.require_scaled({{"workload.rate_per_client_tps", 1.0}});
    sc.workload.tx_bits = r.require_scaled(
        {{"workload.tx_size_kb", kb}, {"workload.tx_size_bits", 1.0}}, preset,
        sc.workload.tx_bits);

    sc.execute.cores = r.require_int("execute.cores");
    sc.execute.core_service_rate = r.require_scaled({{"execute.mu_core_tps", 1.0}});
    sc.execute.link.overhead_s = r.require_scaled(
        {{"execute.alpha_ms", ms}, {"execute.alpha_s", 1.0}}, preset,
        sc.execute.link.overhead_s);
    sc.execute.link.bandwidth_bps = r.require_scaled(
        {{"execute.beta_mbps", mbps}, {"execute.beta_bps", 1.0}}, preset,
        sc.execute.link.bandwidth_bps);
    if (auto reply = r.take_scaled(
            {{"execute.reply_beta_mbps", mbps}, {"execute.reply_beta_bps", 1.0}})) {
        LinkParams reply_link = sc.execute.link;
        reply_link.bandwidth_bps = *reply;
        sc.execute.reply_link = reply_link;
    }

    sc.order.osn_count = r.require_int("order.osns");
    sc.order.sequencing_rate = r.require_scaled({{"order.mu_order_tps", 1.0}});
    sc.order.batch_timeout_s = r.require_scaled(
        {{"order.batch_timeout_ms", ms}, {"order.batch_timeout_s", 1.0}});
    sc.order.batch_size = r.require_int("order.batch_size");
    sc.order.link_client_to_leader.overhead_s = r.require_scaled(
        {{"order.c2l_alpha_ms", ms}, {"order.c2l_alpha_s", 1.0}}, preset,
        sc.order.link_client_to_leader.overhead_s);
    sc.order.link_client_to_leader.bandwidth_bps = r.require_scaled(
        {{"order.c2l_beta_mbps", mbps}, {"order.c2l_beta_bps", 1.0}}, preset,
        sc.order.link_client_to_leader.bandwidth_bps);
    sc.order.link_leader_to_followers.overhead_s = r.require_scaled(
        {{"order.l2f_alpha_ms", ms}, {"order.l2f_alpha_s", 1.0}}, preset,
        sc.order.link_leader_to_followers.overhead_s);
    sc.order.link_leader_to_followers.bandwidth_bps = r.require_scaled(
        {{"order.l2f_beta_mbps", mbps}, {"order.l2f_beta_bps", 1.0}}, preset,
        sc.order.link_leader_to_followers.bandwidth_bps);
    sc.order.var.cv_arrival =
        r.take_scaled({{"order.cv_arrival", 1.0}}).value_or(1.0);
    sc.order.var.cv_service =
        r.take_scaled({{"order.cv_service", 1.0}}).value_or(0.0);

    if (auto kind = r.take_string("validate.disk")) {
        if (*kind == "hdd")
            sc.validate.disk.kind = DiskParams::Kind::HDD;
        else if (*kind == "ssd")
            sc.validate.disk.kind = DiskParams::Kind::SSD;
        else
            throw ParseError(origin, r.line_of("validate.disk"),
                             "validate.disk must be hdd or ssd");
    } else if (!preset) {
        throw ValidationError("validate.disk", "missing required field");
    }
    sc.validate.disk.iops = r.require_scaled({{"validate.iops", 1.0}}, preset,
                                             sc.validate.disk.iops);
    sc.validate.disk.seek_s = r.take_scaled(
        {{"validate.seek_ms", ms}, {"validate.seek_s", 1.0}})
        .value_or(preset ? sc.validate.disk.seek_s : 0.0);
    sc.io_bytes_override = r.take_scaled(
        {{"validate.io_size_kb", 1024.0}, {"validate.io_size_bytes", 1.0}});
    sc.validate.link.overhead_s = r.require_scaled(
        {{"validate.alpha_ms", ms}, {"validate.alpha_s", 1.0}}, preset,
        sc.validate.link.overhead_s);
    sc.validate.link.bandwidth_bps = r.require_scaled(
        {{"validate.beta_mbps", mbps}, {"validate.beta_bps", 1.0}}, preset,
        sc.validate.link.bandwidth_bps);
    sc.validate.var.cv_arrival =
        r.take_scaled({{"validate.cv_arrival", 1.0}}).value_or(1.0);
    sc.validate.var.cv_service =
        r.take_scaled({{"validate.cv_service", 1.0}}).value_or(0.0);

    if (auto per_message = r.take_bool("comm.per_message_term");
        per_message.value_or(false)) {
        sc.execute.link.per_message_term = true;
        if (sc.execute.reply_link)
            sc.execute.reply_link->per_message_term = true;
        sc.order.link_client_to_leader.per_message_term = true;
        sc.order.link_leader_to_followers.per_message_term = true;
        sc.validate.link.per_message_term = true;
    }

    if (auto jitter = r.take_string("sim.comm_jitter")) {
        if (*jitter == "none")
            sc.comm_jitter = CommJitter::None;
        else if (*jitter == "exponential")
            sc.comm_jitter = CommJitter::Exponential;
        else
            throw ParseError(origin, r.line_of("sim.comm_jitter"),
                             "sim.comm_jitter must be none or exponential");
    }

    const auto sweep_parameter = r.take_string("sweep.parameter");
    const auto sweep_values = r.take_string("sweep.values");
    if (sweep_parameter.has_value() != sweep_values.has_value())
        throw ValidationError("sweep.parameter",
                              "sweep.parameter and sweep.values go together");
    if (sweep_parameter) {
        SweepSpec spec;
        if (*sweep_parameter == "cores")
            spec.parameter = SweepSpec::Parameter::Cores;
        else if (*sweep_parameter == "osns")
            spec.parameter = SweepSpec::Parameter::Osns;
        else if (*sweep_parameter == "lambda")
            spec.parameter = SweepSpec::Parameter::Lambda;
        else if (*sweep_parameter == "batch_size")
            spec.parameter = SweepSpec::Parameter::BatchSize;
        else
            throw ParseError(origin, r.line_of("sweep.parameter"),
                             "sweep.parameter must be one of cores, osns, "
                             "lambda, batch_size");
        std::stringstream list(*sweep_values);
        std::string item;
        while (std::getline(list, item, ',')) {
            const std::string text = trim(item);
            if (text.empty())
                continue;
            char* end = nullptr;
            const double v = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size())
                throw ParseError(origin, r.line_of("sweep.values"),
                                 "'" + text + "' is not a number");
            spec.values.push_back(v);
        }
        sc.sweep = std::move(spec);
    }

    r.reject_unused();
    sc.refresh_derived();
    validate_scenario(sc);
    return sc;
}

void write_scenario(const ScenarioConfig& sc, std::ostream& out) {
    if (!sc.preset.empty())
        out << "preset = " << sc.preset << "\n";
    out << "workload.clients = " << sc.workload.clients << "\n";
    out << "workload.rate_per_client_tps = "
        << format_double(sc.workload.per_client_rate) << "\n";
    out << "workload.tx_size_bits = " << format_double(sc.workload.tx_bits)
        << "\n";
    out << "execute.cores = " << sc.execute.cores << "\n";
    out << "execute.mu_core_tps = " << format_double(sc.execute.core_service_rate)
        << "\n";
    out << "execute.alpha_s = " << format_double(sc.execute.link.overhead_s)
        << "\n";
    out << "execute.beta_bps = " << format_double(sc.execute.link.bandwidth_bps)
        << "\n";
    if (sc.execute.reply_link)
        out << "execute.reply_beta_bps = "
            << format_double(sc.execute.reply_link->bandwidth_bps) << "\n";
    out << "order.osns = " << sc.order.osn_count << "\n";
    out << "order.mu_order_tps = " << format_double(sc.order.sequencing_rate)
        << "\n";
    out << "order.batch_timeout_s = " << format_double(sc.order.batch_timeout_s)
        << "\n";
    out << "order.batch_size = " << sc.order.batch_size << "\n";
    out << "order.c2l_alpha_s = "
        << format_double(sc.order.link_client_to_leader.overhead_s) << "\n";
    out << "order.c2l_beta_bps = "
        << format_double(sc.order.link_client_to_leader.bandwidth_bps) << "\n";
    out << "order.l2f_alpha_s = "
        << format_double(sc.order.link_leader_to_followers.overhead_s) << "\n";
    out << "order.l2f_beta_bps = "
        << format_double(sc.order.link_leader_to_followers.bandwidth_bps) << "\n";
    out << "order.cv_arrival = " << format_double(sc.order.var.cv_arrival) << "\n";
    out << "order.cv_service = " << format_double(sc.order.var.cv_service) << "\n";
    out << "validate.disk = "
        << (sc.validate.disk.kind == DiskParams::Kind::HDD ? "hdd" : "ssd")
        << "\n";
    out << "validate.iops = " << format_double(sc.validate.disk.iops) << "\n";
    out << "validate.seek_s = " << format_double(sc.validate.disk.seek_s) << "\n";
    if (sc.io_bytes_override)
        out << "validate.io_size_bytes = " << format_double(*sc.io_bytes_override)
            << "\n";
    out << "validate.alpha_s = " << format_double(sc.validate.link.overhead_s)
        << "\n";
    out << "validate.beta_bps = "
        << format_double(sc.validate.link.bandwidth_bps) << "\n";
    out << "validate.cv_arrival = " << format_double(sc.validate.var.cv_arrival)
        << "\n";
    out << "validate.cv_service = " << format_double(sc.validate.var.cv_service)
        << "\n";
    if (sc.execute.link.per_message_term)
        out << "comm.per_message_term = true\n";
    if (sc.comm_jitter == CommJitter::Exponential)
        out << "sim.comm_jitter = exponential\n";
    if (sc.sweep) {
        out << "sweep.parameter = " << sweep_parameter_name(sc.sweep->parameter)
            << "\n";
        out << "sweep.values = ";
        for (size_t i = 0; i < sc.sweep->values.size(); ++i) {
            if (i)
                out << ",";
            out << format_double(sc.sweep->values[i]);
        }
        out << "\n";
    }
}

void apply_sweep_value(ScenarioConfig& sc, SweepSpec::Parameter parameter,
                       double value) {
    using P = SweepSpec::Parameter;
    switch (parameter) {
    case P::Cores:
        sc.execute.cores = static_cast<int>(value);
        break;
    case P::Osns:
        sc.order.osn_count = static_cast<int>(value);
        break;
    case P::Lambda:
        // Swept as the total offered rate, split evenly across clients.
        sc.workload.per_client_rate = value / sc.workload.clients;
        break;
    case P::BatchSize:
        sc.order.batch_size = static_cast<int>(value);
        break;
    }
    sc.refresh_derived();
}

PipelinePrediction pipeline_predict(const ScenarioConfig& sc) {
    return pipeline_predict(sc.execute, sc.order, sc.validate, sc.offered_rate());
}

} // namespace eov
