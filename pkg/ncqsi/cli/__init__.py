from ncqsi.cli.commands import cmd_converge, cmd_demo, cmd_verify, main
