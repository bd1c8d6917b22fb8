#pragma once

// Circuit data model: neurons, spike sources and delayed weighted synapses,
// plus construction-time and whole-circuit validation.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikegate {

using Tick = int;
using SpikeTrain = std::vector<Tick>;  // strictly increasing ticks, 1 tick = 1 ms

// Leaky integrate-and-fire constants. Times are in ms, potentials in mV,
// capacitance in nF, currents in nA (nA * ms / nF == mV).
struct NeuronParams {
    double c_m = 0.1;          // membrane capacitance (nF)
    double tau_m = 0.1;        // membrane time constant (ms)
    double tau_refrac = 1.0;   // refractory period (ms)
    double tau_syn_E = 0.1;    // excitatory current decay constant (ms)
    double tau_syn_I = 0.1;    // inhibitory current decay constant (ms)
    double v_rest = -65.0;     // resting potential (mV)
    double v_reset = -65.0;    // reset potential (mV)
    double v_thresh = -64.91;  // firing threshold (mV)

    bool operator==(const NeuronParams&) const = default;
};

// The parameter set all logic blocks are built with.
inline const NeuronParams& default_lif_params() {
    static const NeuronParams p{};
    return p;
}

inline std::optional<std::string> check_params(const NeuronParams& p) {
    if (!(p.c_m > 0.0)) return "c_m must be > 0";
    if (!(p.tau_m > 0.0)) return "tau_m must be > 0";
    if (!(p.tau_syn_E > 0.0)) return "tau_syn_E must be > 0";
    if (!(p.tau_syn_I > 0.0)) return "tau_syn_I must be > 0";
    if (!(p.tau_refrac >= 0.0)) return "tau_refrac must be >= 0";
    if (!(p.v_reset <= p.v_rest)) return "v_reset must be <= v_rest";
    if (!(p.v_rest < p.v_thresh)) return "v_rest must be < v_thresh";
    return std::nullopt;
}

struct EndpointId {
    enum class Kind { Neuron, Source };
    Kind kind = Kind::Neuron;
    int index = -1;

    bool operator==(const EndpointId&) const = default;
    auto operator<=>(const EndpointId&) const = default;
};

inline EndpointId neuron_endpoint(int index) { return {EndpointId::Kind::Neuron, index}; }
inline EndpointId source_endpoint(int index) { return {EndpointId::Kind::Source, index}; }

// Weight is a signed integer in abstract units: positive excites, negative
// inhibits. Delay is in whole ticks and must be at least 1.
struct Synapse {
    EndpointId pre;
    int post = -1;  // neuron index
    int weight = 0;
    int delay = 1;
};

struct Neuron {
    std::string name;
    NeuronParams params;
};

struct Source {
    std::string name;
    SpikeTrain spikes;
};

struct ValidationIssue {
    std::string where;    // endpoint or synapse description
    std::string message;
};

class CircuitGraph {
public:
    int add_neuron(const std::string& name, const NeuronParams& params = default_lif_params()) {
        require_fresh_name(name);
        if (auto err = check_params(params)) {
            throw std::invalid_argument("neuron '" + name + "': " + *err);
        }
        neurons_.push_back({name, params});
        int id = static_cast<int>(neurons_.size()) - 1;
        names_.emplace(name, neuron_endpoint(id));
        return id;
    }

    int add_source(const std::string& name, SpikeTrain spikes) {
        require_fresh_name(name);
        if (auto err = check_spike_list(spikes)) {
            throw std::invalid_argument("source '" + name + "': " + *err);
        }
        sources_.push_back({name, std::move(spikes)});
        int id = static_cast<int>(sources_.size()) - 1;
        names_.emplace(name, source_endpoint(id));
        return id;
    }

    // A spike at `pre` at tick t delivers `weight` units to `post` at t + delay.
    int add_synapse(EndpointId pre, int post, int weight, int delay) {
        if (!endpoint_exists(pre)) {
            throw std::invalid_argument("synapse pre endpoint does not exist");
        }
        if (post < 0 || post >= static_cast<int>(neurons_.size())) {
            throw std::invalid_argument("synapse post neuron does not exist");
        }
        if (delay < 1) {
            throw std::invalid_argument("synapse delay must be >= 1 tick");
        }
        if (weight == 0) {
            throw std::invalid_argument("synapse weight must be nonzero");
        }
        synapses_.push_back({pre, post, weight, delay});
        return static_cast<int>(synapses_.size()) - 1;
    }

    void add_probe(int neuron_id) {
        if (neuron_id < 0 || neuron_id >= static_cast<int>(neurons_.size())) {
            throw std::invalid_argument("probe target neuron does not exist");
        }
        probes_.insert(neuron_id);
    }

    bool endpoint_exists(EndpointId e) const {
        int n = e.kind == EndpointId::Kind::Neuron ? static_cast<int>(neurons_.size())
                                                   : static_cast<int>(sources_.size());
        return e.index >= 0 && e.index < n;
    }

    std::optional<EndpointId> find(const std::string& name) const {
        auto it = names_.find(name);
        if (it == names_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& endpoint_name(EndpointId e) const {
        return e.kind == EndpointId::Kind::Neuron ? neurons_.at(e.index).name
                                                  : sources_.at(e.index).name;
    }

    const std::vector<Neuron>& neurons() const { return neurons_; }
    const std::vector<Source>& sources() const { return sources_; }
    const std::vector<Synapse>& synapses() const { return synapses_; }
    const std::set<int>& probes() const { return probes_; }

    // Diagnostics for every invariant violation; empty means well-formed.
    // The builder methods above reject most of these eagerly, so this mainly
    // guards circuits assembled or mutated by other means.
    std::vector<ValidationIssue> validate() const {
        std::vector<ValidationIssue> issues;
        for (const auto& n : neurons_) {
            if (auto err = check_params(n.params)) {
                issues.push_back({n.name, *err});
            }
        }
        for (const auto& s : sources_) {
            if (auto err = check_spike_list(s.spikes)) {
                issues.push_back({s.name, *err});
            }
        }
        for (size_t i = 0; i < synapses_.size(); ++i) {
            const Synapse& syn = synapses_[i];
            std::string where = "synapse #" + std::to_string(i);
            if (!endpoint_exists(syn.pre)) {
                issues.push_back({where, "pre endpoint does not exist"});
                continue;
            }
            where += " (" + endpoint_name(syn.pre) + " -> " +
                     (syn.post >= 0 && syn.post < static_cast<int>(neurons_.size())
                          ? neurons_[syn.post].name
                          : "?") +
                     ")";
            if (syn.post < 0 || syn.post >= static_cast<int>(neurons_.size())) {
                issues.push_back({where, "post neuron does not exist"});
            }
            if (syn.delay < 1) {
                issues.push_back({where, "delay below the 1-tick minimum"});
            }
            if (syn.weight == 0) {
                issues.push_back({where, "zero weight"});
            }
        }
        return issues;
    }

    // Canonical JSON rendering of the whole graph, used to check that
    // elaboration is deterministic (byte-identical dumps).
    std::string dump_json() const {
        std::ostringstream os;
        os << "{\"neurons\":[";
        for (size_t i = 0; i < neurons_.size(); ++i) {
            const auto& n = neurons_[i];
            if (i) os << ",";
            os << "{\"name\":\"" << n.name << "\",\"v_thresh\":" << n.params.v_thresh
               << ",\"v_rest\":" << n.params.v_rest << ",\"v_reset\":" << n.params.v_reset
               << ",\"tau_m\":" << n.params.tau_m << ",\"tau_refrac\":" << n.params.tau_refrac
               << ",\"tau_syn_E\":" << n.params.tau_syn_E
               << ",\"tau_syn_I\":" << n.params.tau_syn_I << ",\"c_m\":" << n.params.c_m << "}";
        }
        os << "],\"sources\":[";
        for (size_t i = 0; i < sources_.size(); ++i) {
            const auto& s = sources_[i];
            if (i) os << ",";
            os << "{\"name\":\"" << s.name << "\",\"spikes\":[";
            for (size_t j = 0; j < s.spikes.size(); ++j) {
                if (j) os << ",";
                os << s.spikes[j];
            }
            os << "]}";
        }
        os << "],\"synapses\":[";
        for (size_t i = 0; i < synapses_.size(); ++i) {
            const auto& syn = synapses_[i];
            if (i) os << ",";
            os << "[\"" << endpoint_name(syn.pre) << "\",\"" << neurons_[syn.post].name
               << "\"," << syn.weight << "," << syn.delay << "]";
        }
        os << "],\"probes\":[";
        bool first = true;
        for (int p : probes_) {
            if (!first) os << ",";
            first = false;
            os << "\"" << neurons_[p].name << "\"";
        }
        os << "]}";
        return os.str();
    }

private:
    void require_fresh_name(const std::string& name) {
        if (name.empty()) throw std::invalid_argument("endpoint name must not be empty");
        if (names_.count(name)) {
            throw std::invalid_argument("duplicate endpoint name '" + name + "'");
        }
    }

    static std::optional<std::string> check_spike_list(const SpikeTrain& spikes) {
        for (size_t i = 0; i < spikes.size(); ++i) {
            if (spikes[i] < 0) return "spike ticks must be >= 0";
            if (i > 0 && spikes[i] <= spikes[i - 1]) {
                return "spike ticks must be strictly increasing";
            }
        }
        return std::nullopt;
    }

    std::vector<Neuron> neurons_;
    std::vector<Source> sources_;
    std::vector<Synapse> synapses_;
    std::set<int> probes_;
    std::map<std::string, EndpointId> names_;
};

}  // namespace spikegate
