
def get_violation_string(violated, limit:int = 5) -> str:
    """
    get a string listing the most violated constraints, one per line
    """
    lines = []
    for name, value in list(violated)[:limit]:
        lines.append(f'    {name:<40} {value: .4e}')
    if len(violated) > limit:
        lines.append(f'    ... and {len(violated) - limit} more')
    return '\n'.join(lines)

def check_keys(document:dict, required:tuple, where:str, diagnostics:list) -> bool:
    """
    appends a diagnostic for every missing key and returns True if all keys are present
    """
    if not isinstance(document, dict):
        diagnostics.append(f'{where}: expected a mapping, got {type(document).__name__}')
        return False
    ok = True
    for key in required:
        if key not in document:
            diagnostics.append(f'{where}: missing field \'{key}\'')
            ok = False
    return ok
