#include "edgc/model_file.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

namespace edgc::io {

namespace {

constexpr char kMagic[4] = {'E', 'D', 'G', 'C'};

class Writer {
public:
    void raw(const void* data, std::size_t size) { bytes_.append(static_cast<const char*>(data), size); }

    template <class T>
    void uint(T value)
    {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
        }
    }

    void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }

    template <class Derived>
    void f64s(const Eigen::DenseBase<Derived>& values)
    {
        // Row-major traversal regardless of the storage order.
        for (Index i = 0; i < values.rows(); ++i) {
            for (Index j = 0; j < values.cols(); ++j) {
                f64(values(i, j));
            }
        }
    }

    std::string take() { return std::move(bytes_); }
    const std::string& bytes() const noexcept { return bytes_; }

private:
    std::string bytes_;
};

// Signals that the declared layout runs past the end of the buffer.
struct OutOfBytes {};

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    template <class T>
    T uint()
    {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

    RowMatrix matrix(std::uint64_t rows, std::uint64_t cols)
    {
        need_elements(rows, cols);
        RowMatrix out(static_cast<Index>(rows), static_cast<Index>(cols));
        for (Index i = 0; i < out.rows(); ++i) {
            for (Index j = 0; j < out.cols(); ++j) {
                out(i, j) = f64();
            }
        }
        return out;
    }

    Vector vector(std::uint64_t size)
    {
        need_elements(size, 1);
        Vector out(static_cast<Index>(size));
        for (Index i = 0; i < out.size(); ++i) {
            out(i) = f64();
        }
        return out;
    }

private:
    void need(std::size_t size)
    {
        if (remaining() < size) {
            throw OutOfBytes{};
        }
    }

    void need_elements(std::uint64_t rows, std::uint64_t cols)
    {
        if (cols != 0 && rows > std::numeric_limits<std::uint64_t>::max() / 8 / cols) {
            throw OutOfBytes{};
        }
        need(static_cast<std::size_t>(rows * cols * 8));
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

CorrectorModel read_fields(Reader& in)
{
    const auto n = in.uint<std::uint64_t>();
    const auto m = in.uint<std::uint64_t>();
    const auto k = in.uint<std::uint64_t>();

    CorrectorModel model;
    model.centering.centroid = in.vector(n);
    model.basis.components = in.matrix(m, n);
    model.basis.eigenvalues = in.vector(m);
    model.whitening.inv_sqrt_eigenvalues = in.vector(m);

    const auto rule = in.uint<std::uint32_t>();
    if (rule > static_cast<std::uint32_t>(SelectionRule::explicit_range)) {
        throw ModelFileError("unknown selection rule tag " + std::to_string(rule));
    }
    model.basis.rule = static_cast<SelectionRule>(rule);

    const auto space = in.uint<std::uint32_t>();
    if (space > static_cast<std::uint32_t>(ClusterSpace::centered_original)) {
        throw ModelFileError("unknown clustering space tag " + std::to_string(space));
    }
    model.clusters.space = static_cast<ClusterSpace>(space);
    model.clusters.k = static_cast<Index>(k);
    model.clusters.centroids = in.matrix(k, model.clusters.space == ClusterSpace::whitened ? m : n);

    model.discriminants.vectors = in.matrix(k, m);
    const auto threshold_count = in.uint<std::uint64_t>();
    const Vector thresholds = in.vector(threshold_count);
    model.discriminants.thresholds.assign(thresholds.data(), thresholds.data() + thresholds.size());
    model.discriminants.ridge = in.f64();

    const auto fused = in.uint<std::uint8_t>();
    if (fused > 1) {
        throw ModelFileError("invalid fused-vector flag");
    }
    if (fused == 1) {
        model.fused_vectors = in.matrix(k, n);
    }
    return model;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string serialize_model(const CorrectorModel& model)
{
    model.validate();
    Writer out;
    out.raw(kMagic, sizeof kMagic);
    out.uint<std::uint32_t>(kModelVersion);
    out.uint<std::uint64_t>(static_cast<std::uint64_t>(model.input_dim()));
    out.uint<std::uint64_t>(static_cast<std::uint64_t>(model.reduced_dim()));
    out.uint<std::uint64_t>(static_cast<std::uint64_t>(model.cluster_count()));
    out.f64s(model.centering.centroid.transpose());
    out.f64s(model.basis.components);
    out.f64s(model.basis.eigenvalues.transpose());
    out.f64s(model.whitening.inv_sqrt_eigenvalues.transpose());
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(model.basis.rule));
    out.uint<std::uint32_t>(static_cast<std::uint32_t>(model.clusters.space));
    out.f64s(model.clusters.centroids);
    out.f64s(model.discriminants.vectors);
    out.uint<std::uint64_t>(model.discriminants.thresholds.size());
    for (double t : model.discriminants.thresholds) {
        out.f64(t);
    }
    out.f64(model.discriminants.ridge);
    out.uint<std::uint8_t>(model.fused_vectors ? 1 : 0);
    if (model.fused_vectors) {
        out.f64s(*model.fused_vectors);
    }
    const std::uint64_t checksum = fnv1a64(out.bytes());
    out.uint<std::uint64_t>(checksum);
    return out.take();
}

CorrectorModel deserialize_model(std::string_view bytes)
{
    if (bytes.size() < sizeof kMagic || bytes.substr(0, sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) {
        throw HeaderError("not a model file: missing EDGC header");
    }
    Reader header(bytes.substr(sizeof kMagic));
    std::uint32_t version = 0;
    try {
        version = header.uint<std::uint32_t>();
    } catch (const OutOfBytes&) {
        throw TruncatedError("model file ends inside its header");
    }
    if (version != kModelVersion) {
        throw VersionError("unsupported model version " + std::to_string(version) + " (expected " +
                           std::to_string(kModelVersion) + ")");
    }

    const std::size_t body_start = sizeof kMagic + 4;
    const bool has_trailer = bytes.size() >= body_start + 8;
    const std::string_view payload = has_trailer ? bytes.substr(0, bytes.size() - 8) : bytes;
    bool checksum_ok = false;
    if (has_trailer) {
        Reader trailer(bytes.substr(bytes.size() - 8));
        checksum_ok = trailer.uint<std::uint64_t>() == fnv1a64(payload);
    }

    Reader body(payload.substr(std::min(body_start, payload.size())));
    CorrectorModel model;
    try {
        model = read_fields(body);
    } catch (const OutOfBytes&) {
        if (checksum_ok) {
            throw ModelFileError("model layout is inconsistent with its size");
        }
        throw TruncatedError("model file is truncated");
    } catch (const ModelFileError&) {
        if (!checksum_ok) {
            throw ChecksumError("model checksum mismatch");
        }
        throw;
    }
    if (!checksum_ok) {
        throw ChecksumError("model checksum mismatch");
    }
    if (body.remaining() != 0) {
        throw ModelFileError("model file has trailing bytes");
    }
    try {
        model.validate();
    } catch (const InvalidInput& e) {
        throw ModelFileError(e.what());
    }
    return model;
}

void save_model(const CorrectorModel& model, const std::filesystem::path& path)
{
    const std::string bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write model to '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing model to '" + path.string() + "'");
    }
}

CorrectorModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open model '" + path.string() + "'");
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace edgc::io
