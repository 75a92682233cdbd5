// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bornlab/serialization.hpp"

#include <cctype>
#include <charconv>
#include <json.hpp>

#include "bornlab/errors.hpp"

namespace bornlab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<Complex> complex_list(const json& j, const char* what) {
    if (!j.is_array()) {
        throw InvalidArgument(std::string(what) + " must be an array of [re, im] pairs");
    }
    std::vector<Complex> out;
    for (const auto& z : j) {
        if (z.is_number()) {
            out.emplace_back(z.get<double>(), 0.0);
            continue;
        }
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
            throw InvalidArgument(std::string(what) + " entries must be [re, im] pairs");
        }
        out.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    return out;
}

std::vector<double> real_list(const json& j, const char* what) {
    if (!j.is_array()) {
        throw InvalidArgument(std::string(what) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) {
            throw InvalidArgument(std::string(what) + " entries must be numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

ordered_json complex_json(std::span<const Complex> v) {
    ordered_json arr = ordered_json::array();
    for (const auto& z : v) {
        arr.push_back({z.real(), z.imag()});
    }
    return arr;
}

StateVector state_from(const json& j) {
    if (!j.is_object() || !j.contains("amplitudes")) {
        throw InvalidArgument("state JSON needs an \"amplitudes\" field");
    }
    return StateVector(complex_list(j["amplitudes"], "amplitudes"));
}

Observable observable_from(const json& j) {
    if (!j.is_object() || !j.contains("eigenvalues")) {
        throw InvalidArgument("observable JSON needs an \"eigenvalues\" field");
    }
    auto eigenvalues = real_list(j["eigenvalues"], "eigenvalues");
    if (j.contains("basis") && !j["basis"].is_null()) {
        return Observable(std::move(eigenvalues), complex_list(j["basis"], "basis"));
    }
    return Observable(std::move(eigenvalues));
}

}  // namespace

std::string state_to_json(const StateVector& psi) {
    ordered_json j;
    j["amplitudes"] = complex_json(psi.amplitudes());
    return j.dump();
}

std::string instance_to_json(const StateVector& psi, const Observable& a) {
    ordered_json j;
    j["amplitudes"] = complex_json(psi.amplitudes());
    j["eigenvalues"] = std::vector<double>(a.eigenvalues().begin(), a.eigenvalues().end());
    if (a.has_basis()) {
        j["basis"] = complex_json(a.basis());
    }
    return j.dump();
}

StateVector state_from_json(std::string_view text) { return state_from(parse(text)); }

Observable observable_from_json(std::string_view text) { return observable_from(parse(text)); }

Instance instance_from_json(std::string_view text) {
    const auto j = parse(text);
    return Instance{state_from(j), observable_from(j)};
}

std::vector<Complex> parse_complex_list(std::string_view text) { return complex_list(parse(text), "complex list"); }

std::vector<double> parse_real_list(std::string_view text) {
    std::size_t first = 0;
    while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) {
        ++first;
    }
    if (first < text.size() && text[first] == '[') {
        return real_list(parse(text), "real list");
    }
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string token(text.substr(pos, comma - pos));
        std::erase_if(token, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            throw InvalidArgument("cannot parse '" + token + "' as a number");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

}  // namespace bornlab
