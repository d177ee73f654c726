#ifndef SYMEXT_SYMEXT_HPP
#define SYMEXT_SYMEXT_HPP

#include <symext/core.hpp>
#include <symext/errors.hpp>
#include <symext/forcing.hpp>
#include <symext/hfset.hpp>
#include <symext/instances.hpp>
#include <symext/kernels.hpp>
#include <symext/names.hpp>
#include <symext/permutation.hpp>
#include <symext/symmetry.hpp>

#endif // SYMEXT_SYMEXT_HPP
