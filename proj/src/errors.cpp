#include "hqmap/errors.hpp"
