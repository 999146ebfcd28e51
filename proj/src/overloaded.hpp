#pragma once

namespace splice {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace splice
