#include <gtest/gtest.h>

#include "spikegate/circuit.hpp"

using namespace spikegate;

TEST(Circuit, AddNeuronStartsAtRest) {
    CircuitGraph c;
    int id = c.add_neuron("or0");
    EXPECT_EQ(id, 0);
    EXPECT_DOUBLE_EQ(c.neurons()[0].params.v_rest, -65.0);
}

TEST(Circuit, RejectsDuplicateName) {
    CircuitGraph c;
    c.add_neuron("n");
    EXPECT_THROW(c.add_neuron("n"), std::invalid_argument);
    EXPECT_THROW(c.add_source("n", {}), std::invalid_argument);
}

TEST(Circuit, RejectsInvalidParams) {
    CircuitGraph c;
    NeuronParams p;
    p.tau_m = 0.0;
    EXPECT_THROW(c.add_neuron("bad", p), std::invalid_argument);
    p = NeuronParams{};
    p.v_thresh = p.v_rest;
    EXPECT_THROW(c.add_neuron("bad2", p), std::invalid_argument);
}

TEST(Circuit, HundredNeuronsGetDistinctIds) {
    CircuitGraph c;
    std::set<int> ids;
    for (int i = 0; i < 100; ++i) {
        ids.insert(c.add_neuron("n" + std::to_string(i)));
    }
    EXPECT_EQ(ids.size(), 100u);
    EXPECT_EQ(c.neurons().size(), 100u);
}

TEST(Circuit, SynapseValidation) {
    CircuitGraph c;
    int a = c.add_neuron("a");
    int b = c.add_neuron("b");
    EXPECT_NO_THROW(c.add_synapse(neuron_endpoint(a), b, -3, 1));
    EXPECT_THROW(c.add_synapse(neuron_endpoint(a), b, 1, 0), std::invalid_argument);
    EXPECT_THROW(c.add_synapse(neuron_endpoint(a), b, 0, 1), std::invalid_argument);
    EXPECT_THROW(c.add_synapse(neuron_endpoint(7), b, 1, 1), std::invalid_argument);
    // a self-synapse is legal; the latch is built on one
    EXPECT_NO_THROW(c.add_synapse(neuron_endpoint(a), a, +1, 1));
}

TEST(Circuit, SourceSpikeListMustBeStrictlyIncreasing) {
    CircuitGraph c;
    EXPECT_NO_THROW(c.add_source("s1", {1}));
    EXPECT_NO_THROW(c.add_source("s2", {}));
    EXPECT_THROW(c.add_source("s3", {3, 3}), std::invalid_argument);
    EXPECT_THROW(c.add_source("s4", {-1}), std::invalid_argument);
}

TEST(Circuit, ValidateReportsDanglingEndpointsByName) {
    CircuitGraph c;
    int a = c.add_neuron("a");
    int b = c.add_neuron("b");
    c.add_synapse(neuron_endpoint(a), b, 1, 1);
    EXPECT_TRUE(c.validate().empty());
}

TEST(Circuit, DumpJsonIsStable) {
    CircuitGraph c;
    c.add_neuron("a");
    c.add_source("s", {1, 2});
    c.add_synapse(source_endpoint(0), 0, 1, 1);
    EXPECT_EQ(c.dump_json(), c.dump_json());
    EXPECT_NE(c.dump_json().find("\"s\""), std::string::npos);
}
