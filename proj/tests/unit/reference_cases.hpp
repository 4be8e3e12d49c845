#pragma once

#include <array>

// Known serialized notices and the plans expected for them.
namespace testsupport::reference {

struct Row {
  const char* site;
  const char* input;
  const char* output;
};

inline constexpr std::array<Row, 5> kDecisionRows = {{
    {"reddit", "button0 - reject non-essential || button1 - accept all <end>", "Click button0."},
    {"netflix",
     "button1 - learn more about our use of cookies and information. || button4 - accept || "
     "button5 - reject || button6 - personalise my choices || button7 - close ** button0 - close || "
     "switch5 - advertising cookies , not selected ||button27 - save settings <end>",
     "Click button5."},
    {"wordpress",
     "button0 - customize || button1 - accept all ** switch3 - analytics: these cookies allow us to "
     "optimize performance by collecting , selected || switch4 - advertising: these cookies are set by "
     "us and our advertising , not selected || button5 - accept selection <end>",
     "Click button0 ** Click  switch3 | Click  button5."},
    {"tata", "button0 - sweet! || button1 - sorry, i'm on a diet <end>", "Click button1."},
    // Second view completed with a confirm button and one switch.
    {"newscientist",
     "button1 - i accept || button2 - show purposes ** button4 - select basic ads; object to legitimate "
     "interests || switch23 - analytics cookies , not selected || button62 - confirm my choices <end>",
     "Click button2 ** Click button4 | Click button62."},
}};

inline constexpr const char* kAskUbuntuSerialized =
    "button0 - customize settings || button1 - accept all cookies ** switch3 - performance cookies, "
    "not selected || switch4 - functional cookies, not selected || switch5 - targeting cookies, not "
    "selected || button6 - confirm my choices || button7 - accept all cookies || button8 - cancel <end>";

inline constexpr const char* kDoNotAllowInput =
    "switch0 - do not allow non-essential cookies, not selected || button1 - save || button2 - accept <end>";
inline constexpr const char* kDoNotAllowPlan = "Click switch0 | Click button1.";

}  // namespace testsupport::reference
