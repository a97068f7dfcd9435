#pragma once

// Channel definition files (.qch), line-prefixed reports and CSV output.

#include "qcap/quantum.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qcap::io {

/// Malformed file; line and column are 1-based, 0 when not applicable.
class ChannelFileError : public Error {
 public:
  ChannelFileError(const std::string& what, int line, int column)
      : Error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct ChannelFile {
  std::string name;
  QuantumChannel channel;
  std::optional<std::vector<PureState>> signals;
};

ChannelFile parse_channel_text(const std::string& text,
                               const std::string& source = "<string>");
ChannelFile parse_channel(const std::filesystem::path& path);

/// Serializes back to the file grammar (17 significant digits).
std::string channel_to_text(const std::string& name, const QuantumChannel& ch,
                            const std::optional<std::vector<PureState>>& signals);

/// %.12g
std::string format_number(double x);
/// %.17g, for dumps that must round-trip.
std::string format_exact(double x);
std::string format_complex(Complex z);

/// Ordered key: value lines.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add_exact(const std::string& key, double value);
  const std::vector<std::pair<std::string, std::string>>& fields() const {
    return fields_;
  }
  std::string find(const std::string& key) const;  // "" when absent

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

void write_report(std::ostream& os, const Report& r);

using CsvRow = std::vector<std::string>;

/// Header row then data rows; fields quoted only when they contain a comma,
/// quote or newline. Lines end in \n.
void emit_csv(std::ostream& os, const CsvRow& header, const std::vector<CsvRow>& rows);
void emit_csv(const std::filesystem::path& path, const CsvRow& header,
              const std::vector<CsvRow>& rows);

}  // namespace qcap::io
