# Main src package