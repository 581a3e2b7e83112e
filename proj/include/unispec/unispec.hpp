#ifndef UNISPEC_UNISPEC_HPP
#define UNISPEC_UNISPEC_HPP

#include "unispec/core.hpp"
#include "unispec/matrix.hpp"
#include "unispec/random.hpp"
#include "unispec/linalg.hpp"
#include "unispec/spectral.hpp"
#include "unispec/geometry.hpp"
#include "unispec/theorems.hpp"
#include "unispec/io.hpp"
#include "unispec/suite.hpp"

#endif  // UNISPEC_UNISPEC_HPP
