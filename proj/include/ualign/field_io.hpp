#ifndef UALIGN_FIELD_IO_HPP
#define UALIGN_FIELD_IO_HPP

#include <string>

#include "ualign/scalar_field.hpp"

namespace ualign {

/** Writes a field snapshot: one line of JSON
 * {dim, n_per_dim, length, representation, time} terminated by '\n',
 * then the raw little-endian 64-bit float payload in row-major order.
 * Spectral fields store interleaved (re,im) pairs. */
void write_field(const ScalarField& f, const std::string& path);

/** Reads a snapshot written by write_field. */
ScalarField read_field(const std::string& path);

} // namespace ualign

#endif
