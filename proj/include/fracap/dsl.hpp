// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_DSL_HPP
#define FRACAP_DSL_HPP

#include <stdexcept>
#include <string>

#include "fracap/besov.hpp"
#include "fracap/geometry.hpp"

namespace fracap {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// Shape grammar:
//   interval:a=-1,b=1
//   ball:n=2,r=1,c=0,0            (c optional, defaults to the origin)
//   box:lo=0,0;hi=1,2
//   boxunion:box:lo=...;hi=...|box:lo=...;hi=...
Shape parse_shape(const std::string& text);

// Function grammar:
//   tent:n=1[,spacing=...]
//   bump:n=2,r=1[,spacing=...]
//   pyramid:n=2[,spacing=...]
//   cutoff:shape=<shape-dsl>,eps=0.1[,spacing=...]
//   file:<path>                   (headerless grid file)
SampledFunction parse_function(const std::string& text);

}  // namespace fracap

#endif
