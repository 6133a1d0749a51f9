#include "pwl/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pwl {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string network_to_json(const Network& net) {
  net.validate();
  std::ostringstream out;
  out << "{\n  \"input_dim\": " << net.input_dim << ",\n  \"layers\": [";
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    out << (l ? ",\n" : "\n") << "    {\n";
    if (layer.activation.is_maxout())
      out << "      \"activation\": \"maxout\",\n      \"rank\": " << layer.rank() << ",\n";
    else
      out << "      \"activation\": \"rectifier\",\n";
    out << "      \"width\": " << layer.width << ",\n      \"weights\": [";
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      out << (r ? ",\n" : "\n") << "        [";
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        out << (c ? ", " : "") << format_double(layer.weights(r, c));
      out << "]";
    }
    out << "\n      ],\n      \"bias\": [";
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      out << (r ? ", " : "") << format_double(layer.bias[r]);
    out << "]\n    }";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

namespace {

int get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + "missing field \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(where + "field \"" + key + "\" must be an integer");
  return v.get<int>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + "expected a number");
  return v.get<double>();
}

}  // namespace

Network network_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("network file must be a JSON object");

  Network net;
  net.input_dim = get_int(doc, "input_dim", "");
  if (net.input_dim < 1) throw ParseError("field \"input_dim\" must be positive");
  if (!doc.contains("layers") || !doc["layers"].is_array())
    throw ParseError("missing array field \"layers\"");

  int prev = net.input_dim;
  int index = 0;
  for (const json& jl : doc["layers"]) {
    ++index;
    const std::string where = "layer " + std::to_string(index) + ": ";
    if (!jl.is_object()) throw ParseError(where + "must be an object");
    if (!jl.contains("activation") || !jl["activation"].is_string())
      throw ParseError(where + "missing string field \"activation\"");
    const std::string act = jl["activation"].get<std::string>();
    int rank = 1;
    if (act == "rectifier") {
      if (jl.contains("rank")) throw ParseError(where + "rank not allowed on a rectifier layer");
    } else if (act == "maxout") {
      rank = get_int(jl, "rank", where);
      if (rank < 2) throw ParseError(where + "maxout rank must be at least 2");
    } else {
      throw ParseError(where + "unknown activation \"" + act + "\"");
    }
    const int width = get_int(jl, "width", where);
    if (width < 1) throw ParseError(where + "width must be positive");
    const int rows = rank * width;

    if (!jl.contains("weights") || !jl["weights"].is_array())
      throw ParseError(where + "missing array field \"weights\"");
    const json& jw = jl["weights"];
    if (static_cast<int>(jw.size()) != rows)
      throw ParseError(where + "weights has " + std::to_string(jw.size()) + " rows, expected " +
                       std::to_string(rows));
    Matrix w(rows, prev);
    for (int r = 0; r < rows; ++r) {
      const json& row = jw[r];
      const std::string rw = where + "weights row " + std::to_string(r + 1) + ": ";
      if (!row.is_array() || static_cast<int>(row.size()) != prev)
        throw ParseError(rw + "expected " + std::to_string(prev) + " entries");
      for (int c = 0; c < prev; ++c) w(r, c) = get_number(row[c], rw);
    }
    if (!jl.contains("bias") || !jl["bias"].is_array())
      throw ParseError(where + "missing array field \"bias\"");
    const json& jb = jl["bias"];
    if (static_cast<int>(jb.size()) != rows)
      throw ParseError(where + "bias has " + std::to_string(jb.size()) + " entries, expected " +
                       std::to_string(rows));
    Vector b(rows);
    for (int r = 0; r < rows; ++r) b[r] = get_number(jb[r], where + "bias: ");

    net.layers.push_back(rank == 1 ? Layer::rectifier(std::move(w), std::move(b))
                                   : Layer::maxout(rank, std::move(w), std::move(b)));
    prev = width;
  }
  try {
    net.validate();
  } catch (const StructureError& e) {
    throw ParseError(e.what());
  }
  return net;
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << network_to_json(net);
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return network_from_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace pwl
