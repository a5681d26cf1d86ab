#include "spanse/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace spanse {

namespace {

struct CtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

std::unique_ptr<EVP_MD_CTX, CtxDeleter> digest_begin(const EVP_MD* md,
                                                     std::initializer_list<std::span<const std::uint8_t>> parts) {
    std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1) throw std::runtime_error("EVP_DigestInit_ex failed");
    for (auto part : parts)
        if (!part.empty() && EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1)
            throw std::runtime_error("EVP_DigestUpdate failed");
    return ctx;
}

}  // namespace

Digest sha3_256(std::initializer_list<std::span<const std::uint8_t>> parts) {
    auto ctx = digest_begin(EVP_sha3_256(), parts);
    Digest out{};
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size())
        throw std::runtime_error("EVP_DigestFinal_ex failed");
    return out;
}

void shake256(std::initializer_list<std::span<const std::uint8_t>> parts, std::span<std::uint8_t> out) {
    auto ctx = digest_begin(EVP_shake256(), parts);
    if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1)
        throw std::runtime_error("EVP_DigestFinalXOF failed");
}

XofStream::XofStream(std::string_view tag, std::span<const std::uint8_t> seed) {
    prefix_.assign(tag.begin(), tag.end());
    prefix_.push_back(0);
    prefix_.insert(prefix_.end(), seed.begin(), seed.end());
}

void XofStream::refill() {
    std::array<std::uint8_t, 8> ctr{};
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
    ++counter_;
    shake256({prefix_, ctr}, buf_);
    pos_ = 0;
}

std::uint8_t XofStream::next_byte() {
    if (pos_ == buf_.size()) refill();
    return buf_[pos_++];
}

std::uint32_t XofStream::next_u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{next_byte()} << (8 * i);
    return v;
}

std::uint64_t XofStream::next_u64() {
    if (buf_.size() - pos_ >= 8) {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf_[pos_ + i]} << (8 * i);
        pos_ += 8;
        return v;
    }
    std::uint64_t lo = next_u32();
    return lo | (std::uint64_t{next_u32()} << 32);
}

void XofStream::read(std::span<std::uint8_t> out) {
    for (auto& b : out) b = next_byte();
}

}  // namespace spanse
