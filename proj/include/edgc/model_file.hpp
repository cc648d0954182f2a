#pragma once

// Binary model format, little-endian throughout:
//
//   "EDGC" | u32 version | u64 n | u64 m | u64 k
//   f64[n]    centroid
//   f64[m*n]  basis rows
//   f64[m]    eigenvalues
//   f64[m]    whitening weights
//   u32       selection rule (0 kaiser, 1 broken stick, 2 conditioning, 3 range)
//   u32       clustering space (0 whitened, 1 centred original)
//   f64[k*c]  cluster centroids, c = m (whitened) or n (original)
//   f64[k*m]  discriminant vectors
//   u64 t | f64[t] thresholds | f64 ridge
//   u8 fused flag | f64[k*n] fused vectors when the flag is 1
//   u64       FNV-1a checksum of every preceding byte

#include "edgc/corrector.hpp"

#include <filesystem>
#include <string>

namespace edgc::io {

inline constexpr std::uint32_t kModelVersion = 1;

class ModelFileError : public Error {
public:
    using Error::Error;
};
/// Missing or wrong magic (including an empty file).
class HeaderError : public ModelFileError {
public:
    using ModelFileError::ModelFileError;
};
class VersionError : public ModelFileError {
public:
    using ModelFileError::ModelFileError;
};
class TruncatedError : public ModelFileError {
public:
    using ModelFileError::ModelFileError;
};
class ChecksumError : public ModelFileError {
public:
    using ModelFileError::ModelFileError;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::string serialize_model(const CorrectorModel& model);

/// Per-point cluster assignments are training diagnostics and are not stored.
CorrectorModel deserialize_model(std::string_view bytes);

void save_model(const CorrectorModel& model, const std::filesystem::path& path);
CorrectorModel load_model(const std::filesystem::path& path);

}  // namespace edgc::io
