// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <memory>
#include <string>

#include "tg/explore.hh"

namespace tg {

// Read-only JSON API over an Explorer:
//   GET /meta           {n_leaves, vocab_size, doc_count, root}
//   GET /flat?n=K&top=M T(K) as a list of topics sorted by f(t)
//   GET /node/{id}?top=M
//   GET /path/{id}      root-to-node chain
class ApiServer {
 public:
  explicit ApiServer(const Explorer& explorer);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tg
