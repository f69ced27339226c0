#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "dgsim/dense_op.hpp"
#include "dgsim/error.hpp"
#include "dgsim/gaussian_state.hpp"
#include "dgsim/gaussian_unitary.hpp"
#include "dgsim/simulator.hpp"

// JSON documents, one versioned schema per kind:
//   dgsim.state/1        {n, lambdas} or {n, M, mu}; M row-major 2n×2n
//   dgsim.hamiltonian/1  {n, h, d}
//   dgsim.gates/1        {n, gates, stats?}
//   dgsim.circuit/1      {n, input: {lambdas | bloch | covariance}, gates, measure: {lines, x | shots + seed}}
//   dgsim.dense/1        {n, kind: "vector" | "matrix", re, im}
//   dgsim.result/1       command output
// A gate is {kind: matchgate | line1, j, k, angle}, {kind: fswap, line} or {kind: rx | ry | rz, angle}.
namespace dgsim::io {

using json = nlohmann::json;

inline constexpr const char* kStateSchema = "dgsim.state/1";
inline constexpr const char* kHamiltonianSchema = "dgsim.hamiltonian/1";
inline constexpr const char* kGatesSchema = "dgsim.gates/1";
inline constexpr const char* kCircuitSchema = "dgsim.circuit/1";
inline constexpr const char* kDenseSchema = "dgsim.dense/1";
inline constexpr const char* kResultSchema = "dgsim.result/1";

// malformed input; what() carries "line:col" or a JSON pointer
struct ParseError : Error {
  using Error::Error;
};

json parse_text(std::string_view text, const std::string& source);
json load_file(const std::string& path);
// 2-space indent, trailing newline; doubles are written shortest round-trip
std::string dump(const json& doc);
std::string schema_of(const json& doc);

DGaussState parse_state(const json& doc);
json to_json(const DGaussState& s);

struct Hamiltonian {
  AntisymMat h;
  Vec d;
};
Hamiltonian parse_hamiltonian(const json& doc);
json to_json(const Hamiltonian& h);

Gate parse_gate(const json& g, int n, const std::string& where);
json to_json(const Gate& g);
GateSequence parse_gates(const json& doc);
json to_json(const GateSequence& seq);

Circuit parse_circuit(const json& doc);
json to_json(const Circuit& c);

DenseOp parse_dense(const json& doc);
json to_json(const DenseOp& op);

}  // namespace dgsim::io
