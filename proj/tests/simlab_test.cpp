#include <doctest.h>

#include "welrci/simlab.hpp"
