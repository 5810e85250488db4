// Copyright (c) 2026 The igprm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "igprm/error.hpp"

namespace igprm
{

std::string_view errc_name(Errc code)
{
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::PlacementFailed: return "PlacementFailed";
    case Errc::NoValidCrop: return "NoValidCrop";
    case Errc::ClassKindMismatch: return "ClassKindMismatch";
    case Errc::EmptyText: return "EmptyText";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MissingCredential: return "MissingCredential";
    case Errc::InvalidDim: return "InvalidDim";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionUnsupported: return "VersionUnsupported";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DegenerateEdge: return "DegenerateEdge";
    case Errc::EmptyResultSet: return "EmptyResultSet";
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::DegeneratePath: return "DegeneratePath";
    case Errc::OracleFailed: return "OracleFailed";
    case Errc::MissingWeights: return "MissingWeights";
    case Errc::EmptyReport: return "EmptyReport";
    case Errc::TemplateExhausted: return "TemplateExhausted";
    case Errc::DatasetInvalid: return "DatasetInvalid";
    case Errc::UnreadableMap: return "UnreadableMap";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::NetworkError: return "NetworkError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_io_error(Errc code)
{
  return code == Errc::UnreadableMap || code == Errc::TruncatedFile ||
         code == Errc::NetworkError || code == Errc::IoError;
}

Error::Error(Errc code, const std::string & what)
: std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
{
}

}  // namespace igprm
