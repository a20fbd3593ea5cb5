// A host runner for the digital library stories in samples/. The portal is
// simulated in memory; the steps are the usual user-side glue.

#include <bddstack/cli.hpp>
#include <bddstack/expectations.hpp>

#include <string>

namespace {

struct Portal {
  bool logged_in = false;
  std::string body;

  void open() { body = "Welcome to the digital library"; }
  void click(const std::string& link) {
    if (link == "Add Content" && !logged_in)
      body = "Error: Access Denied";
  }
};

Portal& portal(bddstack::ScenarioContext& ctx) {
  if (!ctx.host.has_value())
    ctx.host = Portal{};
  return std::any_cast<Portal&>(ctx.host);
}

bddstack::StepRegistry portal_steps() {
  using namespace bddstack::fluent;
  bddstack::StepRegistry reg;
  reg.given("I am at the digital library portal as a guest user",
            [](auto& ctx, auto&) { portal(ctx).open(); });
  reg.when("I try to add content", [](auto& ctx, auto&) { portal(ctx).click("Add Content"); });
  reg.then("I see \"{message}\" error message", [](auto& ctx, const bddstack::Captures& args) {
    args.at("message") | should | be_into(portal(ctx).body);
  });
  reg.given("que estou no portal da biblioteca digital como visitante",
            [](auto& ctx, auto&) { portal(ctx).open(); });
  reg.when("tento adicionar conteúdo", [](auto& ctx, auto&) { portal(ctx).click("Add Content"); });
  reg.then("vejo a mensagem de erro \"{mensagem}\"", [](auto& ctx, const bddstack::Captures& args) {
    auto expected = args.at("mensagem") == "Acesso Negado" ? "Access Denied" : args.at("mensagem");
    expected | should | be_into(portal(ctx).body);
  });
  reg.freeze();
  return reg;
}

}  // namespace

int main(int argc, char** argv) {
  auto steps = portal_steps();
  return bddstack::cli_main(argc, argv, &steps);
}
